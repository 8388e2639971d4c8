"""Generate the synthetic sample datasets shipped in data/.

Run from the repo root: python3 scripts/make_datasets.py
"""

import csv
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
sys.path.insert(0, str(ROOT / "tests"))

from util_fixtures import make_marker_png  # noqa: E402

CITIES = [
    ("Copenhagen", 12.568, 55.676, 0.45),
    ("Aarhus", 10.203, 56.157, 0.25),
    ("Odense", 10.388, 55.403, 0.15),
    ("Aalborg", 9.921, 57.048, 0.15),
]


def city_mixture(rng, n):
    weights = np.array([c[3] for c in CITIES])
    which = rng.choice(len(CITIES), n, p=weights / weights.sum())
    lon = np.array([CITIES[i][1] for i in which]) + rng.normal(0, 0.12, n)
    lat = np.array([CITIES[i][2] for i in which]) + rng.normal(0, 0.07, n)
    return lon, lat


def write(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    DATA.mkdir(exist_ok=True)
    rng = np.random.default_rng(1234)

    # bus stops: dense point cloud around the cities
    lon, lat = city_mixture(rng, 10_000)
    rows = [(f"stop-{i:05d}", f"{lat[i]:.6f}", f"{lon[i]:.6f}")
            for i in range(len(lon))]
    write(DATA / "bus.csv", ["name", "lat", "lon"], rows)

    # cell towers: sparser, with an operator column for grouping
    lon, lat = city_mixture(rng, 2_000)
    ops = rng.choice(["alfa", "bravo", "delta"], len(lon))
    rows = [(ops[i], f"{lat[i]:.6f}", f"{lon[i]:.6f}") for i in range(len(lon))]
    write(DATA / "towers.csv", ["operator", "lat", "lon"], rows)

    # flights: origin/destination pairs between the cities (jittered)
    n = 3_000
    src = rng.integers(0, len(CITIES), n)
    dst = (src + rng.integers(1, len(CITIES), n)) % len(CITIES)
    rows = []
    for i in range(n):
        slon = CITIES[src[i]][1] + rng.normal(0, 0.02)
        slat = CITIES[src[i]][2] + rng.normal(0, 0.02)
        dlon = CITIES[dst[i]][1] + rng.normal(0, 0.02)
        dlat = CITIES[dst[i]][2] + rng.normal(0, 0.02)
        rows.append((f"{slat:.6f}", f"{slon:.6f}", f"{dlat:.6f}", f"{dlon:.6f}"))
    write(DATA / "flights.csv",
          ["lat_departure", "lon_departure", "lat_arrival", "lon_arrival"], rows)

    # metro stations: small named list (tooltips/markers demo)
    stations = [
        ("Vanloese", 55.6876, 12.4873), ("Flintholm", 55.6809, 12.4992),
        ("Forum", 55.6812, 12.5528), ("Noerreport", 55.6833, 12.5714),
        ("Kongens Nytorv", 55.6795, 12.5852), ("Christianshavn", 55.6726, 12.5914),
        ("Islands Brygge", 55.6636, 12.5852), ("Oerestad", 55.6298, 12.5786),
        ("Lufthavnen", 55.6299, 12.6493), ("Amagerbro", 55.6626, 12.6027),
    ]
    rows = [(n_, f"{la:.4f}", f"{lo:.4f}") for n_, la, lo in stations]
    write(DATA / "metro.csv", ["name", "lat", "lon"], rows)

    # taxi trail: one vehicle track ordered in time (animation demo)
    t = np.linspace(0, 2 * np.pi, 400)
    lat_t = 55.676 + 0.05 * np.sin(t) + rng.normal(0, 0.002, len(t))
    lon_t = 12.568 + 0.09 * np.cos(t) + rng.normal(0, 0.002, len(t))
    rows = [(str(i), f"{lat_t[i]:.6f}", f"{lon_t[i]:.6f}") for i in range(len(t))]
    write(DATA / "taxi.csv", ["timestep", "lat", "lon"], rows)

    make_marker_png(DATA / "m.png")
    print(f"wrote {DATA / 'm.png'}")


if __name__ == "__main__":
    main()
