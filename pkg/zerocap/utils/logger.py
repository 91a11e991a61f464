# zerocap/utils/logger.py
import logging
import sys
from pathlib import Path

try:
    from .config import settings
except ImportError:
    # Fallback for when running scripts directly
    class DefaultSettings:
        LOG_LEVEL = "INFO"
        LOG_FILE = None
        BASE_DIR = Path(__file__).parent.parent.parent

    settings = DefaultSettings()

ROOT_LOGGER = "zerocap"


class UnicodeStreamHandler(logging.StreamHandler):
    """Falls back to ASCII when the console cannot encode Υ, Σ or ϑ."""
    def emit(self, record):
        try:
            msg = self.format(record)
            self.stream.write(msg + self.terminator)
            self.flush()
        except UnicodeEncodeError:
            try:
                msg = msg.encode('ascii', 'replace').decode('ascii')
                self.stream.write(msg + self.terminator)
                self.flush()
            except Exception:
                pass
        except Exception:
            self.handleError(record)


def _configure_root(root: logging.Logger) -> None:
    try:
        log_level = getattr(logging, str(settings.LOG_LEVEL).upper())
    except (AttributeError, ValueError):
        log_level = logging.INFO
    root.setLevel(log_level)

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # stdout carries reports, so diagnostics go to stderr
    console_handler = UnicodeStreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root.addHandler(console_handler)

    log_file = getattr(settings, "LOG_FILE", None)
    if log_file:
        try:
            file_handler = logging.FileHandler(Path(log_file), encoding='utf-8')
            file_handler.setFormatter(formatter)
            root.addHandler(file_handler)
        except (OSError, PermissionError) as e:
            root.warning(f"Could not set up file logging at {log_file}: {e}")


def setup_logging(name: str = ROOT_LOGGER) -> logging.Logger:
    """Return a logger under the ``zerocap`` hierarchy, configuring the root once."""
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        _configure_root(root)

    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def set_level(level: int) -> None:
    """Adjust verbosity after start-up (the CLI quiets INFO unless -v)."""
    setup_logging().setLevel(level)


# Create a default logger instance
logger = setup_logging()
