"""Classification of submitted files into code vs prose, by extension."""

from __future__ import annotations

from pathlib import PurePosixPath

CODE_EXTENSIONS = {
    ".c", ".cc", ".cpp", ".cs", ".css", ".go", ".h", ".hpp", ".html", ".java",
    ".js", ".json", ".jsx", ".kt", ".m", ".php", ".pl", ".py", ".r", ".rb",
    ".rs", ".scala", ".sh", ".sql", ".swift", ".ts", ".tsx", ".xml", ".yaml", ".yml",
}


def is_code_path(path: str) -> bool:
    return PurePosixPath(path).suffix.lower() in CODE_EXTENSIONS
