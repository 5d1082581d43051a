"""Utils module"""
import os
import time
import pathlib
import logging
import functools
from typing import Callable, ParamSpec, TypeVar

from rationd import exceptions

P = ParamSpec("P")
R = TypeVar("R")


class FileHandlerMixin():
    """File handler mixin"""

    VALID_EXTENSIONS: list[str] = []

    @property
    def file_path(self) -> pathlib.Path:
        """File path"""
        if not hasattr(self, "_file_path"):
            raise AttributeError("File path not set")

        return self._file_path

    @file_path.setter
    def file_path(self, file_path: os.PathLike | str) -> None:
        """File path"""
        self._validate_file_extension(file_path=file_path)

        self._file_path = pathlib.Path(file_path)

    def ensure_exists(self) -> None:
        """Fail early when reading a file that is not there"""
        if not self.file_path.exists():
            raise FileNotFoundError(f"File path {self.file_path} does not exist")

    def _validate_file_extension(self, file_path: os.PathLike | str) -> None:
        """Validate file extension"""
        _, file_extension = os.path.splitext(file_path)
        if not self.VALID_EXTENSIONS:
            raise ValueError("VALID_EXTENSIONS attribute not set")
        if file_extension not in self.VALID_EXTENSIONS:
            raise exceptions.WrongFileExtension(
                f"File extension {file_extension} not valid. Valid extensions are: {self.VALID_EXTENSIONS}")


def log_time(logger_name: str) -> Callable[[Callable[P, R]], Callable[P, R]]:
    """Log the wall-clock duration of the decorated call"""

    logger = logging.getLogger(logger_name)

    def timer(func: Callable[P, R]) -> Callable[P, R]:
        """Timer decorator"""

        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> R:
            """Wrapper"""
            start = time.perf_counter()
            result = func(*args, **kwargs)
            end = time.perf_counter()
            logger.info(f"{func.__name__} took {end - start:.2f} seconds")
            return result

        return wrapper

    return timer
