# src/utils/logger.py
"""
Mise en place de la journalisation loguru.
"""

import sys

from loguru import logger

from src.config import AppConfig

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


class LogBuffer:
    """Puits en mémoire : garde les messages formatés."""

    def __init__(self):
        self.logs = []

    def write(self, message):
        self.logs.append(message)

    def flush(self):
        pass

    def text(self) -> str:
        return "".join(str(message) for message in self.logs)


def setup_logging(config: AppConfig, verbose: bool = False) -> LogBuffer:
    """
    Configure la journalisation.

    Args:
        config: Configuration de l'application
        verbose: Niveau DEBUG sur la console (WARNING sinon)

    Returns:
        LogBuffer: Le puits en mémoire installé
    """
    logger.remove()
    level = "DEBUG" if verbose or config.debug_mode else "WARNING"

    log_buffer = LogBuffer()
    logger.add(log_buffer.write, level=level, format=LOG_FORMAT, colorize=False)
    logger.add(sys.stderr, level=level, format=LOG_FORMAT, diagnose=True)
    if config.log_to_file:
        logger.add(
            config.paths.logs_path / "exactregen.log",
            rotation="10 MB",
            level="DEBUG",
            format=LOG_FORMAT,
            diagnose=True,
        )
    return log_buffer
