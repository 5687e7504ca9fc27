#!/usr/bin/env python3
"""Offline ranking oracle: score one source word against every target token
by raw embedding dot product, bypassing the HTTP path and the softmax.

Use it to sanity-check that the configured encoder ranks contextually
correct correspondences first, e.g. that "fire" prefers "disparar" over
"incêndio"-like distractors in:

    EMBED_ALIGN_ENCODER=transformers python scripts/rank_oracle.py \
      --src "The soldiers were ordered to fire their weapons" \
      --tgt "Os soldados receberam ordens para disparar as suas armas" \
      --word fire

The default hash encoder has no semantics; rankings are only meaningful
with a real multilingual model configured.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from embed_align_service.encoders import encoder_from_env  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--src", required=True, help="source sentence (whitespace-tokenized)")
    parser.add_argument("--tgt", required=True, help="target sentence (whitespace-tokenized)")
    parser.add_argument("--word", required=True, help="source word whose row to rank")
    args = parser.parse_args()

    src_tokens = args.src.split()
    tgt_tokens = args.tgt.split()
    if args.word not in src_tokens:
        print(f"error: {args.word!r} is not a token of the source sentence", file=sys.stderr)
        return 1

    encoder = encoder_from_env()
    src_vectors = encoder.encode(src_tokens)
    tgt_vectors = encoder.encode(tgt_tokens)
    row = src_vectors[src_tokens.index(args.word)] @ tgt_vectors.T

    print(f"encoder: {encoder.model_id}")
    print(f"row for {args.word!r}, ranked by dot product:")
    for j in sorted(range(len(tgt_tokens)), key=lambda j: -row[j]):
        print(f"  {row[j]:+10.4f}  {tgt_tokens[j]}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
