#!/usr/bin/env python3
# Copyright 2026 The JudgeFuse Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates src/unicode_tables.inc from Python's bundled Unicode database.

Emits three sorted tables used by the NFC normalizer:
  - canonical decompositions (fully expanded, Hangul excluded: algorithmic)
  - nonzero canonical combining classes
  - primary composition pairs (composition exclusions filtered out by
    checking round-trip behaviour against unicodedata.normalize)

Run from the repository root:  python3 tools/gen_unicode_tables.py
"""

import sys
import unicodedata

HANGUL_S_BASE = 0xAC00
HANGUL_S_COUNT = 11172


def is_hangul_syllable(cp: int) -> bool:
    return HANGUL_S_BASE <= cp < HANGUL_S_BASE + HANGUL_S_COUNT


def canonical_decomposition(cp: int):
    """Raw canonical (non-compat) decomposition, or None."""
    raw = unicodedata.decomposition(chr(cp))
    if not raw or raw.startswith("<"):
        return None
    return [int(tok, 16) for tok in raw.split()]


def full_decomposition(cp: int):
    """Recursively expanded canonical decomposition of one code point."""
    parts = canonical_decomposition(cp)
    if parts is None:
        return [cp]
    out = []
    for p in parts:
        out.extend(full_decomposition(p))
    return out


def main() -> int:
    max_cp = 0x110000
    decomp = {}   # cp -> expanded decomposition (list of cps)
    ccc = {}      # cp -> nonzero combining class
    comp = {}     # (starter, combiner) -> composite

    for cp in range(max_cp):
        if is_hangul_syllable(cp):
            continue
        ch = chr(cp)
        k = unicodedata.combining(ch)
        if k:
            ccc[cp] = k
        parts = canonical_decomposition(cp)
        if parts is None:
            continue
        decomp[cp] = full_decomposition(cp)
        if len(parts) == 2:
            a, b = parts
            # A pair recomposes iff NFC maps it back (this filters the
            # composition-exclusion list without needing the raw data file).
            if unicodedata.normalize("NFC", chr(a) + chr(b)) == ch:
                comp[(a, b)] = cp

    flat = []  # (cp, offset, length) into a shared expansion pool
    pool = []
    for cp in sorted(decomp):
        seq = decomp[cp]
        flat.append((cp, len(pool), len(seq)))
        pool.extend(seq)

    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py; do not edit.\n")
    out.write(f"// Unicode database version {unicodedata.unidata_version}\n\n")

    out.write(f"static const uint32_t kDecompPool[{len(pool)}] = {{\n")
    for i in range(0, len(pool), 10):
        out.write("  " + ",".join(f"0x{v:X}" for v in pool[i:i + 10]) + ",\n")
    out.write("};\n\n")

    out.write(f"static const DecompEntry kDecomp[{len(flat)}] = {{\n")
    for cp, off, n in flat:
        out.write(f"  {{0x{cp:X},{off},{n}}},\n")
    out.write("};\n\n")

    items = sorted(ccc.items())
    out.write(f"static const CccEntry kCcc[{len(items)}] = {{\n")
    for i in range(0, len(items), 6):
        out.write("  " + ",".join(f"{{0x{c:X},{k}}}" for c, k in items[i:i + 6]) + ",\n")
    out.write("};\n\n")

    pairs = sorted(comp.items())
    out.write(f"static const CompEntry kComp[{len(pairs)}] = {{\n")
    for (a, b), c in pairs:
        out.write(f"  {{0x{a:X},0x{b:X},0x{c:X}}},\n")
    out.write("};\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
