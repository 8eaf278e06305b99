#!/usr/bin/env python3
"""Generate the checked-in evaluation dataset (data/financial_position_31k.csv).

A deterministic 31,000-row, 7-column financial-position table engineered
so that simple reference quantities hold exactly:

* grand total of "Amount (US$-Millions)"            = 558,430,000
* group (Assets, dfb, 2010) sums to                 =       1,581
* group (Assets, dfb, 2009) sums to                 =       2,380
* group (Equity, oe, 2009) sums to                  =      -1,683

where groups are (Category, Subcategory Code, Fiscal Year) triples.  No
other row falls into those three triples, so the group sums are stable
regardless of how the rest of the data is aggregated.

This script is intentionally independent of the minicube package: it
verifies its own output with a plain csv + dict oracle, making it a
cross-check for the engine rather than a consumer of it.
"""

from __future__ import annotations

import argparse
import csv
import random
from pathlib import Path

SEED = 20140615
ROWS = 31_000
GRAND_TOTAL = 558_430_000

HEADERS = [
    "Category",
    "Category Code",
    "Subcategory Code",
    "Subcategory",
    "Fiscal Year",
    "Amount (US$-Millions)",
    "Line Item",
]

CATEGORIES: dict[str, tuple[str, dict[str, str]]] = {
    "Assets": ("AST", {
        "dfb": "Due from banks",
        "cash": "Cash and equivalents",
        "sec": "Investment securities",
        "loans": "Net loans",
        "ppe": "Premises and equipment",
    }),
    "Liabilities": ("LIA", {
        "dep": "Customer deposits",
        "debt": "Long-term debt",
        "dtb": "Due to banks",
        "othl": "Other liabilities",
    }),
    "Equity": ("EQT", {
        "oe": "Owners' equity",
        "re": "Retained earnings",
        "mi": "Minority interest",
    }),
    "Revenue": ("REV", {
        "int": "Interest income",
        "fees": "Fees and commissions",
        "trad": "Trading income",
    }),
    "Expenses": ("EXP", {
        "opex": "Operating expenses",
        "prov": "Loan loss provisions",
        "tax": "Tax expense",
    }),
}

YEARS = list(range(2005, 2015))

# (category, subcategory code, fiscal year) -> (group sum, row count)
SPECIAL_GROUPS: dict[tuple[str, str, int], tuple[int, int]] = {
    ("Assets", "dfb", 2010): (1581, 3),
    ("Assets", "dfb", 2009): (2380, 4),
    ("Equity", "oe", 2009): (-1683, 3),
}

ADJUST_ROWS = 2000  # generic rows that absorb the rounding residual


def _split_sum(rng: random.Random, total: int, parts: int) -> list[int]:
    """Split ``total`` into ``parts`` integers that sum exactly to it."""
    values = [total // parts] * parts
    values[0] += total - sum(values)
    for _ in range(parts * 2):  # shuffle value mass around, sum-preserving
        i, j = rng.randrange(parts), rng.randrange(parts)
        d = rng.randint(-50, 50)
        values[i] += d
        values[j] -= d
    assert sum(values) == total
    return values


def build_rows() -> list[list]:
    rng = random.Random(SEED)
    cat_names = list(CATEGORIES)
    rows: list[list] = []

    n_special = sum(count for _, count in SPECIAL_GROUPS.values())
    n_generic = ROWS - n_special
    item_seq = 0

    def line_item() -> str:
        nonlocal item_seq
        item_seq += 1
        return f"Item {item_seq:05d}"

    for _ in range(n_generic):
        cat = rng.choice(cat_names)
        code, subs = CATEGORIES[cat]
        sub = rng.choice(list(subs))
        year = rng.choice(YEARS)
        while (cat, sub, year) in SPECIAL_GROUPS:
            year = rng.choice(YEARS)
        amount = rng.randint(-5000, 41000)
        rows.append([cat, code, sub, subs[sub], year, amount, line_item()])

    # Nudge the grand total onto the target using a block of generic rows,
    # spreading the residual so no single amount becomes an outlier.
    residual = GRAND_TOTAL - sum(SPECIAL_GROUPS[k][0] for k in SPECIAL_GROUPS) - sum(
        r[5] for r in rows
    )
    step = residual // ADJUST_ROWS
    for i in range(ADJUST_ROWS):
        rows[-1 - i][5] += step
    rows[-1][5] += residual - step * ADJUST_ROWS

    for (cat, sub, year), (total, count) in SPECIAL_GROUPS.items():
        code, subs = CATEGORIES[cat]
        for amount in _split_sum(rng, total, count):
            rows.append([cat, code, sub, subs[sub], year, amount, line_item()])

    rng.shuffle(rows)
    return rows


def verify(path: Path) -> None:
    """Re-read the file with a bare csv oracle and assert every target."""
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert header == HEADERS, header
        total = 0
        count = 0
        groups: dict[tuple[str, str, str], int] = {}
        for row in reader:
            assert len(row) == 7, row
            amount = int(row[5])
            total += amount
            count += 1
            key = (row[0], row[2], row[4])
            groups[key] = groups.get(key, 0) + amount
    assert count == ROWS, count
    assert total == GRAND_TOTAL, total
    for (cat, sub, year), (expected, _) in SPECIAL_GROUPS.items():
        got = groups[(cat, sub, str(year))]
        assert got == expected, ((cat, sub, year), got, expected)
    print(f"verified: {count} rows, total {total}")
    for key, (expected, n) in SPECIAL_GROUPS.items():
        print(f"verified: group {key} -> {expected} over {n} rows")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "data" / "financial_position_31k.csv"),
    )
    args = parser.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = build_rows()
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADERS)
        writer.writerows(rows)
    print(f"wrote {out} ({len(rows)} rows)")
    verify(out)


if __name__ == "__main__":
    main()
