"""
Path management utilities.

All artifact writes go through here so that a failed run never leaves a
partially written file behind.
"""
from pathlib import Path
from typing import Union
import os
import tempfile

from ..utils.exceptions import ArtifactIOError

PathLike = Union[str, Path]


class PathManager:
    """Resolves user paths and writes artifacts atomically."""

    @staticmethod
    def resolve(path: PathLike) -> Path:
        """Expand a user-supplied path."""
        return Path(path).expanduser()

    @staticmethod
    def write_bytes(path: PathLike, payload: bytes) -> Path:
        """
        Atomically write bytes to a file, creating parent directories.

        Args:
            path: Destination path
            payload: File contents

        Returns:
            The resolved destination path

        Raises:
            ArtifactIOError: If the file cannot be written
        """
        target = PathManager.resolve(path)
        tmp_name = None
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
            with os.fdopen(fd, "wb") as handle:
                handle.write(payload)
            os.replace(tmp_name, target)
        except OSError as e:
            if tmp_name and os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise ArtifactIOError(f"cannot write {target}: {e}") from e
        return target

    @staticmethod
    def write_text(path: PathLike, text: str) -> Path:
        """Atomically write UTF-8 text with '\\n' line endings."""
        return PathManager.write_bytes(path, text.encode("utf-8"))

    @staticmethod
    def read_text(path: PathLike) -> str:
        """
        Read a UTF-8 text file.

        Raises:
            ArtifactIOError: If the file cannot be read
        """
        target = PathManager.resolve(path)
        try:
            return target.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ArtifactIOError(f"cannot read {target}: {e}") from e
