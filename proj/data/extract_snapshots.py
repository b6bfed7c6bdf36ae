#!/usr/bin/env python3
"""Regenerate the bundled CSV snapshots from the Rdatasets wheel.

    pip download --no-deps rdatasets==0.2.10 -d /tmp/rd
    python3 data/extract_snapshots.py /tmp/rd/rdatasets-0.2.10-py3-none-any.whl

Sources inside the wheel:
  Ecdat/USGDPpresidents  US CPI, GDP deflator, real GDP per capita (2012 $),
                         BLS unemployment (annual averages), via MeasuringWorth
  stevedata/pwt_sample   Penn World Table 10.0: rgdpna / pop
  dslabs/gapminder       World Bank WDI GDP (constant 2000 US$) / population
  stevedata/wbd_example  World Bank WDI GDP per capita (constant 2015 US$)

The US 2020 quarterly file is not in the wheel; it is maintained by hand
(see data/us/README.md).
"""
import io
import sys
import zipfile
from pathlib import Path

import pandas as pd

COUNTRIES = {
    # dir: (PWT iso, gapminder name, WDI iso)
    "us": ("USA", "United States", "USA"),
    "uk": ("GBR", "United Kingdom", "GBR"),
    "france": ("FRA", "France", "FRA"),
    "germany": ("DEU", "Germany", "DEU"),
    "canada": ("CAN", "Canada", "CAN"),
    "australia": ("AUS", "Australia", "AUS"),
    "spain": ("ESP", "Spain", "ESP"),
    "austria": ("AUT", "Austria", "AUT"),
    "japan": ("JPN", "Japan", "JPN"),
    "switzerland": ("CHE", "Switzerland", "CHE"),
}


def load(whl, name):
    with zipfile.ZipFile(whl) as z:
        raw = z.read(f"rdatasets/_data/{name}.pkl.compress")
    return pd.read_pickle(io.BytesIO(raw), compression="xz")


def write(path, years, values, digits):
    with open(path, "w", newline="\n") as f:
        f.write("year,value\n")
        for y, v in zip(years, values):
            if pd.notna(v):
                f.write(f"{int(y)},{v:.{digits}f}\n")


def main(whl, out=Path(__file__).resolve().parent):
    us = load(whl, "Ecdat/USGDPpresidents").set_index("Year")
    d = out / "us"
    d.mkdir(exist_ok=True)
    span = us.loc[1929:2020]
    write(d / "cpi_index.csv", span.index, span["CPI"], 2)
    write(d / "dgdp_index.csv", span.index, span["GDPdeflator"], 2)
    write(d / "gdppc_bea.csv", span.index, span["realGDPperCapita"], 0)
    u = us.loc[1948:2020, "unemployment"]
    write(d / "unemployment_bls.csv", u.index, u, 3)

    pwt = load(whl, "stevedata/pwt_sample")
    gap = load(whl, "dslabs/gapminder")
    wdi = load(whl, "stevedata/wbd_example")
    for name, (iso, gname, wiso) in COUNTRIES.items():
        d = out / name
        d.mkdir(exist_ok=True)
        p = pwt[pwt.isocode == iso].sort_values("year")
        write(d / "gdppc_pwt.csv", p.year, 1e6 * p.rgdpna / (1e6 * p["pop"]), 2)
        g = gap[(gap.country == gname) & gap.gdp.notna()].sort_values("year")
        write(d / "gdppc_wdi2000.csv", g.year, g.gdp / g.population, 2)
        w = wdi[(wdi.iso3c == wiso) & wdi.rgdppc.notna()].sort_values("year")
        write(d / "gdppc_wdi2015.csv", w.year, w.rgdppc, 2)


if __name__ == "__main__":
    main(sys.argv[1])
