"""Regenerate the bundled corpus files from the generators.

    python scripts/generate_corpus.py [--out DIR] [--check]

--check compares instead of writing and exits 1 on any difference.
"""

import argparse
import sys
import tempfile
from pathlib import Path

from leibniz import corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=None)
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args(argv)
    target = args.out or corpus.corpus_dir()
    if not args.check:
        for path in corpus.write_corpus(target):
            print(f"wrote {path}")
        return 0
    with tempfile.TemporaryDirectory() as tmp:
        fresh = {p.name: p.read_text() for p in corpus.write_corpus(tmp)}
    stale = 0
    for name, text in sorted(fresh.items()):
        path = target / name
        if not path.exists() or path.read_text() != text:
            print(f"differs: {name}")
            stale += 1
    print(f"{len(fresh) - stale}/{len(fresh)} files up to date")
    return 1 if stale else 0


if __name__ == "__main__":
    sys.exit(main())
