#!/usr/bin/env python3
"""Regenerates the demo corpus under data/demo/ (deterministic)."""
import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data" / "demo"
OUT.mkdir(parents=True, exist_ok=True)

rng = random.Random(20250810)

FIRST = ["Kestrel", "Harbor", "Summit", "Cedar", "Lumen", "Vertex", "Quarry",
         "Beacon", "Orchard", "Granite", "Falcon", "Juniper", "Cobalt", "Meridian"]
SECOND = ["Dynamics", "Holdings", "Industries", "Systems", "Logistics", "Partners",
          "Works", "Group", "Labs", "Foods", "Energy", "Materials"]


def money_sci(lo, hi):
    return f"{rng.randint(lo, hi):.5E}"


def mdY(year_lo=2015, year_hi=2024, two_digit=True):
    m = rng.randint(1, 12)
    d = rng.randint(1, 28)
    y = rng.randint(year_lo, year_hi)
    return f"{m}/{d}/{y % 100:02d}" if two_digit else f"{m}/{d}/{y}"


def write(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"{name}: {len(rows)} rows")


# --- sec_filings.csv -------------------------------------------------------
header = ["company_name", "stock_ticker", "revenue", "revenue_period",
          "revenue_filing_date", "revenue_unit", "net_income", "net_income_period",
          "eps_basic", "eps_basic_unit", "operating_income", "operating_income_period"]
rows = []
for i in range(56):
    name = f"{FIRST[i % len(FIRST)]} {SECOND[i % len(SECOND)]}"
    ticker = "".join(rng.choice("ABCDEFGHKLMNPRSTUVWXYZ") for _ in range(rng.randint(3, 4)))
    period = mdY()
    filing = mdY()
    net_income = rng.randint(-4_000_000_000, 9_000_000_000)
    row = [
        name, ticker,
        money_sci(1_000_000_000, 900_000_000_000),
        period, filing, "USD",
        str(net_income), period if rng.random() < 0.5 else mdY(),
        f"{rng.uniform(-4, 12):.2f}", "USD/shares",
        str(rng.randint(50_000_000, 5_000_000_000)), mdY(),
    ]
    # sprinkle nulls outside the identifier columns
    if rng.random() < 0.12:
        row[6] = ""  # net_income
    if rng.random() < 0.10:
        row[8] = ""  # eps_basic
    if i in (13, 37):  # all-null operating group -> placeholder reports
        row[10] = ""
        row[11] = ""
    rows.append(row)
write("sec_filings.csv", header, rows)

# --- weather_stations.csv --------------------------------------------------
MONTHS = ["January", "February", "March", "April", "May", "June", "July",
          "August", "September", "October", "November", "December"]
header = ["station_name", "region", "elevation_m", "record_high_c", "record_low_c",
          "commissioned", "last_inspection", "humidity_pct"]
rows = []
for i in range(60):
    commissioned = f"{rng.choice(MONTHS)} {rng.randint(1, 28)}, {rng.randint(1961, 2019)}"
    iso = f"{rng.randint(2018, 2025)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
    row = [
        f"Station {FIRST[(i * 3) % len(FIRST)]}",
        f"{rng.choice(['North', 'South', 'East', 'West'])} {rng.choice(['Ridge', 'Basin', 'Plateau', 'Shore'])}",
        str(rng.randint(12, 1850)),
        f"{rng.uniform(18, 46):.1f}",
        f"{rng.uniform(-38, 4):.1f}",
        commissioned, iso,
        f"{rng.uniform(20, 95):.1f}%",
    ]
    if rng.random() < 0.10:
        row[4] = ""  # record_low_c
    if rng.random() < 0.08:
        row[6] = ""  # last_inspection
    rows.append(row)
write("weather_stations.csv", header, rows)

# --- products.csv -----------------------------------------------------------
ADJ = ["Maxima", "Prime", "Nova", "Atlas", "Zephyr", "Orbit", "Pioneer", "Vista"]
NOUN = ["Widget", "Burr Grinder", "Trail Lamp", "Field Kit", "Thermo Flask",
        "Bench Vise", "Rain Shell", "Packraft"]
CATS = ["kitchen", "outdoor", "workshop", "travel", "office"]
header = ["product_name", "category", "price", "price_unit", "launched_date",
          "units_sold", "rating", "quarter_listed", "support_phone"]
rows = []
for i in range(55):
    row = [
        f"{NOUN[i % len(NOUN)]} {ADJ[(i * 5) % len(ADJ)]}",
        rng.choice(CATS),
        f"{rng.uniform(4, 900):.2f}",
        "USD",
        mdY(2016, 2025, two_digit=False),
        f"{rng.randint(100, 2_500_000):,}",
        f"{rng.uniform(1.0, 5.0):.1f}",
        f"Q{rng.randint(1, 4)} {rng.randint(2016, 2024)}",
        f"555-{rng.randint(100, 999):03d}-{rng.randint(1000, 9999)}",
    ]
    if rng.random() < 0.10:
        row[6] = ""  # rating
    rows.append(row)
write("products.csv", header, rows)
