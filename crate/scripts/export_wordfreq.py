#!/usr/bin/env python3
"""Export a Zipf-unit frequency table for WordNet verb lemma tokens.

Reads wordfreq's packed English list (``large_en.msgpack.gz`` from the
wordfreq 3.1.1 wheel) and writes ``token<TAB>zipf`` lines for every token
that appears in a verb lemma of ``index.verb`` (multiword lemmas are split on
underscores). Tokens absent from wordfreq are omitted.

usage: export_wordfreq.py LARGE_EN_MSGPACK_GZ INDEX_VERB OUT_TSV
"""

import gzip
import sys

import msgpack


def main(packed, index_verb, out):
    data = msgpack.unpackb(gzip.open(packed).read(), raw=False)
    assert data[0].get("format") == "cB", data[0]
    # bucket i holds words at -i centibels, i.e. Zipf 9 - i/100
    zipf = {}
    for idx, bucket in enumerate(data[1:]):
        for word in bucket:
            zipf.setdefault(word, idx)

    tokens = set()
    with open(index_verb, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("  "):
                continue
            for tok in line.split(" ", 1)[0].lower().split("_"):
                if tok:
                    tokens.add(tok)

    with open(out, "w", encoding="utf-8") as fh:
        fh.write("# wordfreq 3.1.1 large_en, Zipf scale, WordNet verb lemma tokens\n")
        for tok in sorted(tokens):
            if tok in zipf:
                fh.write(f"{tok}\t{(900 - zipf[tok]) / 100:.2f}\n")


if __name__ == "__main__":
    main(*sys.argv[1:4])
