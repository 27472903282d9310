"""Logger helpers; every module logs under the ``vireid`` namespace."""
from __future__ import annotations

import logging
import sys

ROOT_LOGGER = "vireid"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def get_logger(name: str) -> logging.Logger:
	if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + "."):
		name = f"{ROOT_LOGGER}.{name}"
	return logging.getLogger(name)


def configure_logging(verbosity: int = 0) -> logging.Logger:
	"""Attach a stderr handler to the package logger.

	``verbosity`` 0 logs warnings, 1 adds info, 2 or more adds debug.
	Calling it again replaces the previous handler.
	"""
	level = logging.WARNING
	if verbosity == 1:
		level = logging.INFO
	elif verbosity >= 2:
		level = logging.DEBUG
	logger = logging.getLogger(ROOT_LOGGER)
	for handler in list(logger.handlers):
		if getattr(handler, "_vireid_handler", False):
			logger.removeHandler(handler)
	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter(LOG_FORMAT))
	handler._vireid_handler = True  # type: ignore[attr-defined]
	logger.addHandler(handler)
	logger.setLevel(level)
	return logger


__all__ = ["get_logger", "configure_logging"]
