"""
Permutation input parser.
Reads one permutation per line from text, a file or a stream.
"""

from pathlib import Path
from typing import Iterable, List, TextIO

from stacksort_bijection.core.errors import PermutationParseError
from stacksort_bijection.core.perm_core import Permutation, parse_permutation
from stacksort_bijection.utils.logger import get_logger

logger = get_logger(__name__)


def parse_permutation_lines(lines: Iterable[str]) -> List[Permutation]:
    """
    Parse one permutation per line.

    Blank lines and lines starting with '#' are skipped.

    Args:
        lines: Text lines (trailing newlines allowed)

    Returns:
        Permutations in input order

    Raises:
        PermutationParseError: on the first malformed line, with its line number
    """
    perms = []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            perms.append(parse_permutation(text))
        except PermutationParseError as e:
            logger.error(f"Line {number}: {str(e)}")
            raise PermutationParseError(f"line {number}: {e}", token=e.token) from e
    return perms


def parse_permutation_stream(stream: TextIO) -> List[Permutation]:
    return parse_permutation_lines(stream)


def parse_permutation_file(file_path: str) -> List[Permutation]:
    """
    Parse a file of permutations, one per line.

    Args:
        file_path: Path to the text file

    Returns:
        Permutations in file order
    """
    try:
        logger.info(f"Parsing permutation file: {file_path}")
        with open(file_path, "r", encoding="utf-8") as f:
            perms = parse_permutation_lines(f)
        logger.info(f"Parsed {len(perms)} permutations from {Path(file_path).name}")
        return perms
    except Exception as e:
        logger.error(f"Error parsing permutation file {file_path}: {str(e)}")
        raise
