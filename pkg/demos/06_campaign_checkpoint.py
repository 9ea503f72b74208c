#!/usr/bin/env python3
"""A checkpointed campaign, interrupted and resumed, then summarized.

Equivalent command line:
    primline verify --degree 3 --range 2..110 --checkpoint ck.json --out v.jsonl
    primline report v.jsonl
"""

import tempfile
from pathlib import Path

from primline.arith import prime_powers_between
from primline.cli import main
from primline.search import CampaignConfig, run_campaign


class Interrupted(Exception):
    pass


tmp = Path(tempfile.mkdtemp())
targets = [(q, 3, "line") for _, _, q in prime_powers_between(2, 110)]
cfg = CampaignConfig(targets, workers=2, checkpoint_path=tmp / "ck.json", chunk_size=8192)


def stop_once(state):
    if state["q"] == 103 and state["next_k"] >= 100_000 and not stopped:
        stopped.append(state["next_k"])
        raise Interrupted


stopped = []
try:
    for v in run_campaign(cfg, on_checkpoint=stop_once):
        pass
except Interrupted:
    print(f"interrupted while deciding q=103 at k={stopped[0]}")

with open(tmp / "v.jsonl", "w") as fh:
    for v in run_campaign(cfg):
        fh.write(v.dumps() + "\n")
print("resumed and finished; verdicts in", tmp / "v.jsonl")

main(["report", str(tmp / "v.jsonl"), "--bin-width", "50"])
