import hashlib
import logging
import math
import os
from typing import Optional, Union

from colorama import Fore, Style


# Console palette, backed by colorama so it also works on Windows terminals
class Colors:
    RED = Fore.RED
    GREEN = Fore.GREEN
    YELLOW = Fore.YELLOW
    BLUE = Fore.BLUE
    MAGENTA = Fore.MAGENTA
    CYAN = Fore.CYAN
    WHITE = Fore.WHITE
    BOLD = Style.BRIGHT
    RESET = Style.RESET_ALL


class ColorFormatter(logging.Formatter):
    """Colour warnings and errors the same way the CLI colours its status lines"""

    LEVEL_COLORS = {
        logging.WARNING: Colors.YELLOW,
        logging.ERROR: Colors.RED,
        logging.CRITICAL: Colors.RED + Colors.BOLD,
    }

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        color = self.LEVEL_COLORS.get(record.levelno)
        if color:
            return f"{color}{message}{Colors.RESET}"
        return message


def configure_logging(verbose: bool = False) -> logging.Logger:
    """Install the console handler on the package logger"""
    logger = logging.getLogger("citecheck")
    level_name = os.environ.get("CITECHECK_LOG_LEVEL")
    if level_name:
        level = logging.getLevelName(level_name.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    else:
        level = logging.INFO if verbose else logging.WARNING
    logger.setLevel(level)

    for handler in list(logger.handlers):
        if getattr(handler, "_citecheck", False):
            logger.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setFormatter(ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    handler._citecheck = True
    logger.addHandler(handler)
    return logger


def format_real(value: Optional[Union[int, float]]) -> str:
    """Six significant digits; None becomes an empty CSV field"""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    if math.isnan(value):
        return ""
    return f"{value:.6g}"


def file_digest(path: str) -> str:
    """sha256 of a file's bytes"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b''):
            digest.update(chunk)
    return digest.hexdigest()


def stable_hash64(text: str) -> int:
    """Process-independent 64-bit hash (str hash() is salted per interpreter)"""
    return int.from_bytes(hashlib.blake2b(text.encode('utf-8'), digest_size=8).digest(), 'big')
