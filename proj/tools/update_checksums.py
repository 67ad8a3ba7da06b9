"""Write or verify data/checksums.txt (zlib crc32 per bundled file).

usage: update_checksums.py [--check] DATA_DIR
"""
import argparse
import pathlib
import sys
import zlib

LISTED_DIRS = ("absorption", "water", "bands", "spectra", "atmospheres")
LISTED_FILES = ("species.kv",)


def bundled(root):
    files = [root / f for f in LISTED_FILES]
    for d in LISTED_DIRS:
        files += sorted(p for p in (root / d).rglob("*") if p.is_file())
    return sorted(files)


def table(root):
    lines = []
    for p in bundled(root):
        crc = zlib.crc32(p.read_bytes()) & 0xFFFFFFFF
        lines.append(f"{crc:08x}  {p.relative_to(root).as_posix()}")
    return "\n".join(lines) + "\n"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    ap.add_argument("data_dir", type=pathlib.Path)
    args = ap.parse_args()
    want = table(args.data_dir)
    target = args.data_dir / "checksums.txt"
    if args.check:
        have = target.read_text() if target.exists() else ""
        if have != want:
            sys.stdout.write("checksums.txt is stale\n")
            return 1
        sys.stdout.write(f"{len(want.splitlines())} checksums verified\n")
        return 0
    target.write_text(want)
    return 0


if __name__ == "__main__":
    sys.exit(main())
