"""
Obtain and compare SHA256 hashes of run outputs.
    Args:
    -f input arbitrary number of filepaths separated by whitespace
    Example:
    python3 -m utils.get_file_hash -f library/run/records/records_dude_asgd_seed0.jsonl

    -d hash every output file below a run directory
    [optional] -c a second run directory; files whose hashes differ are listed
    Example:
    python3 -m utils.get_file_hash -d library/run_a -c library/run_b
"""

import argparse
import hashlib
import os
import sys
from typing import Dict, List


def get_hash(filepath: str) -> str:
    """Get hexadecimal representation of data file."""
    sha_file = hashlib.sha256()
    with open(filepath, "rb") as f:
        while True:
            data = f.read(65536)
            if not data:
                break
            sha_file.update(data)
    return sha_file.hexdigest()


def get_file_hash(*args: str) -> List[str]:
    """Print and return the hash of every file passed in."""
    hash_list = []
    for arg in args:
        digest = get_hash(arg)
        print(f"File: {os.path.basename(arg)}\n{digest} \n", flush=True)
        hash_list.append(digest)
    return hash_list


def get_directory_hashes(dir_path: str) -> Dict[str, str]:
    """Relative path -> hash for every non-Python file below dir_path."""
    hashes = {}
    for root, _, filepaths in os.walk(dir_path):
        for name in sorted(filepaths):
            if name.endswith(".py"):
                continue
            full = os.path.join(root, name)
            hashes[os.path.relpath(full, dir_path)] = get_hash(full)
    return hashes


def compare_directories(dir_a: str, dir_b: str) -> List[str]:
    """Relative paths that are missing from one directory or whose contents differ."""
    a, b = get_directory_hashes(dir_a), get_directory_hashes(dir_b)
    return sorted(k for k in set(a) | set(b) if a.get(k) != b.get(k))


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("-f", dest="files", nargs="+")
    parser.add_argument("-d", dest="dirs")
    parser.add_argument("-c", dest="compare", default=None)
    arguments = parser.parse_args()

    if arguments.files:
        get_file_hash(*arguments.files)
    elif arguments.dirs and arguments.compare:
        differing = compare_directories(arguments.dirs, arguments.compare)
        for name in differing:
            print(f"differs: {name}")
        sys.exit(1 if differing else 0)
    elif arguments.dirs:
        for name, digest in get_directory_hashes(arguments.dirs).items():
            print(f"{name}  {digest}")
