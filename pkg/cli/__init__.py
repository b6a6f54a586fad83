"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 parse or range error,
3 denominator outside product form.
"""

from __future__ import annotations

import json
import logging
import sys
from typing import List, Optional

from services import settings
from services.errors import (
    InvalidStep,
    MacdonaldError,
    NotProductForm,
    NvarsMismatch,
    ParseError,
    RangeError,
)
from services.polyarith import render_qt_poly
from services.ybgraph import set_cache_dir

from .parser import build_parser

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_PRODUCT_FORM = 3


def _configure_cache(args) -> None:
    cache_dir = args.cache_dir or settings.get_saved_cache_dir()
    if args.remember_cache_dir:
        settings.save_cache_dir(args.cache_dir)
    set_cache_dir(cache_dir)
    if cache_dir:
        logger.debug("memo cache at %s", cache_dir)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        _configure_cache(args)
        code, text, data = args.handler(args)
    except NotProductForm as exc:
        residual = render_qt_poly(exc.residual) if exc.residual is not None else "?"
        print(f"error: {exc}\nresidual: {residual}", file=sys.stderr)
        return EXIT_NOT_PRODUCT_FORM
    except (ParseError, RangeError, InvalidStep, NvarsMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MacdonaldError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAILED

    if args.json:
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)
    return code


__all__ = ["main", "build_parser"]
