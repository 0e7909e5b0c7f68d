#!/usr/bin/env python3
"""Convert NHANES 2011-2014 public files to the cogwear epoch and survey CSVs.

Input directory: the SAS transport (.XPT) files of both cycles, named as
published (PAXMIN_G.XPT, PAXHD_G.XPT, DEMO_G.XPT, DIQ_G.XPT, DPQ_G.XPT,
PFQ_G.XPT, CFQ_G.XPT and the _H equivalents). See docs/nhanes_adapter.md.
"""

import argparse
import datetime as dt
import math
from pathlib import Path

import pandas as pd

CYCLES = ("G", "H")
ANCHOR = dt.datetime(2000, 1, 3)  # calendar dates are not released; any fixed anchor works
SAMPLES_PER_MINUTE = 80 * 60
PHQ_ITEMS = [f"DPQ0{i}0" for i in range(1, 10)]
ADL_ITEMS = [f"PFQ061{c}" for c in "ABCDEFGHIJKLMNOPQRST"]


def xpt(directory, stem, cycle, columns=None):
    frame = pd.read_sas(directory / f"{stem}_{cycle}.XPT", format="xport")
    return frame if columns is None else frame[columns]


def code(value, valid):
    """Integer code when it is one of `valid`, else None (refused, don't know, missing)."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    v = int(round(value))
    return v if v in valid else None


def income_ordinal(value):
    v = code(value, set(range(1, 11)) | {12, 13, 14, 15})
    if v is None or v in (12, 13):  # open-ended "over / under $20,000" answers
        return None
    return {14: 11, 15: 12}.get(v, v)


def item_sum(row, items, lo, hi):
    values = [code(row[i], set(range(lo, hi + 1))) for i in items]
    return None if any(v is None for v in values) else sum(values)


def survey_rows(directory):
    for cycle in CYCLES:
        demo = xpt(directory, "DEMO", cycle, ["SEQN", "RIDAGEYR", "RIAGENDR", "DMDEDUC2", "DMDMARTL", "INDHHIN2"])
        diq = xpt(directory, "DIQ", cycle, ["SEQN", "DIQ010"])
        dpq = xpt(directory, "DPQ", cycle, ["SEQN"] + PHQ_ITEMS)
        pfq = xpt(directory, "PFQ", cycle, ["SEQN"] + ADL_ITEMS)
        cfq = xpt(directory, "CFQ", cycle, ["SEQN", "CFDCST1", "CFDCST2", "CFDCST3", "CFDCSR", "CFDAST", "CFDDS"])
        merged = demo
        for other in (diq, dpq, pfq, cfq):
            merged = merged.merge(other, on="SEQN", how="left")
        for _, r in merged.iterrows():
            diabetic = code(r["DIQ010"], {1, 2, 3})
            cerad_parts = [code(r[c], set(range(0, 11))) for c in ("CFDCST1", "CFDCST2", "CFDCST3", "CFDCSR")]
            yield {
                "participant_id": str(int(r["SEQN"])),
                "age": code(r["RIDAGEYR"], set(range(0, 81))),
                "sex": code(r["RIAGENDR"], {1, 2}),
                "education": code(r["DMDEDUC2"], {1, 2, 3, 4, 5}),
                "marital": code(r["DMDMARTL"], {1, 2, 3, 4, 5, 6}),
                "income": income_ordinal(r["INDHHIN2"]),
                "diabetic": None if diabetic is None else int(diabetic == 1),
                "phq9": item_sum(r, PHQ_ITEMS, 0, 3),
                "adl_iadl": item_sum(r, ADL_ITEMS, 1, 4),
                "cerad_wl": None if any(v is None for v in cerad_parts) else sum(cerad_parts),
                "aft": code(r["CFDAST"], set(range(0, 1000))),
                "dsst": code(r["CFDDS"], set(range(0, 134))),
            }


def write_survey(directory, path):
    columns = ["participant_id", "age", "sex", "education", "marital", "income", "diabetic", "phq9", "adl_iadl", "cerad_wl", "aft", "dsst"]
    with open(path, "w", newline="\n") as out:
        out.write(",".join(columns) + "\n")
        for row in survey_rows(directory):
            out.write(",".join("" if row[c] is None else str(row[c]) for c in columns) + "\n")


def write_epochs(directory, path, chunk_rows):
    with open(path, "w", newline="\n") as out:
        out.write("participant_id,timestamp,mims,lux,wear\n")
        for cycle in CYCLES:
            header = xpt(directory, "PAXHD", cycle, ["SEQN", "PAXFTIME"])
            start = {}
            for _, r in header.iterrows():
                raw = r["PAXFTIME"]
                text = raw.decode() if isinstance(raw, bytes) else str(raw)
                h, m, s = (int(float(x)) for x in text.split(":"))
                start[int(r["SEQN"])] = ANCHOR + dt.timedelta(hours=h, minutes=m, seconds=s)
            reader = pd.read_sas(directory / f"PAXMIN_{cycle}.XPT", format="xport", chunksize=chunk_rows)
            for chunk in reader:
                for seqn, ssn, mims, lux, pred in zip(chunk["SEQN"], chunk["PAXSSNMP"], chunk["PAXMTSM"], chunk["PAXLXMM"], chunk["PAXPREDM"]):
                    seqn = int(seqn)
                    if seqn not in start or math.isnan(mims) or mims < 0 or math.isnan(lux):
                        continue  # MIMS -0.01 marks a minute the algorithm could not score
                    stamp = start[seqn] + dt.timedelta(minutes=int(ssn) // SAMPLES_PER_MINUTE)
                    wear = 1 if int(pred) in (1, 2) else 0  # 1 wake wear, 2 sleep wear, 3 non-wear, 4 unknown
                    out.write(f"{seqn},{stamp:%Y-%m-%dT%H:%M},{mims:.3f},{lux:.2f},{wear}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("xpt_dir", type=Path, help="directory holding the NHANES .XPT files")
    parser.add_argument("out_dir", type=Path, help="directory for epochs.csv and survey.csv")
    parser.add_argument("--chunk-rows", type=int, default=1_000_000)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_survey(args.xpt_dir, args.out_dir / "survey.csv")
    write_epochs(args.xpt_dir, args.out_dir / "epochs.csv", args.chunk_rows)


if __name__ == "__main__":
    main()
