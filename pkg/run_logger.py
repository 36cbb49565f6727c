"""
Run Logging for the Toroidal Workbench
Console plus file logging for scenario runs that never takes a run down
"""

import logging
import traceback
from pathlib import Path
from typing import Optional

ROOT_LOGGER = 'ToroidalWorkbench'


class RunLogger:
    """Attaches handlers to the workbench logger tree; falls back to the console alone"""

    def __init__(self, name: str = ROOT_LOGGER, logs_dir: str = "logs", level: str = "INFO"):
        self.name = name
        self.logs_dir = Path(logs_dir)
        self.level = getattr(logging, str(level).upper(), logging.INFO)

        try:
            self.logs_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            print(f"⚠️ Could not create logs directory: {e}")
            self.logs_dir = None

        self.setup_logging()

    def setup_logging(self):
        formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        self.logger = logging.getLogger(self.name)
        self.logger.setLevel(self.level)
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

        if self.logs_dir is not None:
            for filename, level in (('workbench.log', logging.INFO), ('errors.log', logging.ERROR)):
                try:
                    handler = logging.FileHandler(self.logs_dir / filename)
                    handler.setFormatter(formatter)
                    handler.setLevel(level)
                    self.logger.addHandler(handler)
                except OSError as e:
                    print(f"⚠️ Could not set up {filename}: {e}")

        console = logging.StreamHandler()
        console.setFormatter(formatter)
        console.setLevel(self.level)
        self.logger.addHandler(console)

    def log_info(self, message: str):
        try:
            self.logger.info(message)
        except Exception:
            print(f"ℹ️ {message}")

    def log_warning(self, message: str):
        try:
            self.logger.warning(message)
        except Exception:
            print(f"⚠️ {message}")

    def log_error(self, message: str, error: Optional[BaseException] = None, include_traceback: bool = False):
        """Log an error with context; never raises"""
        try:
            text = f"{message}: {error}" if error else message
            self.logger.error(text)
            if include_traceback and error is not None:
                tb = ''.join(traceback.format_exception(type(error), error, error.__traceback__))
                self.logger.error(f"TRACEBACK: {tb}")
        except Exception as meta_error:
            print(f"🔥 LOGGING SYSTEM FAILURE: {meta_error}")
            print(f"🔥 ORIGINAL ERROR: {message}")

    def log_check(self, name: str, passed: bool, checked: int, skipped: int, failures: int):
        status = "✅ passed" if passed else "❌ FAILED"
        self.log_info(f"{name}: {status} ({checked} checked, {skipped} skipped, {failures} failures)")

    def close(self):
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()
