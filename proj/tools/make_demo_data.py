#!/usr/bin/env python3
"""Regenerates the demo instances under data/.

A small two-shift town: one current-situation case (depot + landfill) and two
transfer-station variants (station at the depot, station near the landfill).
Distances are Euclidean over the listed coordinates, travel times assume a
30 km/h connection speed.
"""
import json
import math
import pathlib

DEPOT = (0.0, 0.0)
LANDFILL = (9.0, 7.0)
STATION_B = (8.0, 1.0)

DAY = {
    "coords": [(2.0, 3.0), (5.0, 1.0), (7.0, 4.0), (3.0, 6.0)],
    "internal": [42.50, 38.11, 51.20, 45.80],
    "waste": [9850.0, 9524.0, 8210.0, 10230.0],
    "ids": [1, 2, 3, 4],
}
NIGHT = {
    "coords": [(1.0, 4.0), (6.0, 2.0), (4.0, 5.0)],
    "internal": [44.80, 47.29, 42.96],
    "waste": [11352.0, 9285.0, 10952.0],
    "ids": [1, 2, 3],
}

CAPACITY = 15750.0
TIME_LIMIT = 8.0
LARGE_CAPACITY = 25000.0
SPEED = 30.0


def dist(a, b):
    return round(math.hypot(a[0] - b[0], a[1] - b[1]), 2)


def matrices(points):
    n = len(points)
    d = [[0.0] * n for _ in range(n)]
    h = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d[i][j] = dist(points[i], points[j])
            h[i][j] = round(d[i][j] / SPEED, 3)
    return d, h


def instance(shift, case, station=None):
    if case == "current_situation":
        points = [DEPOT, LANDFILL] + shift["coords"]
        stops = ["depot", "landfill"] + shift["ids"]
    else:
        points = [station] + shift["coords"]
        stops = ["depot"] + shift["ids"]
    d, h = matrices(points)
    doc = {
        "case_kind": case,
        "capacity_Q": CAPACITY,
        "time_limit_T": TIME_LIMIT,
        "micro_routes": [
            {
                "id": mid,
                "internal_distance_km": km,
                "base_waste_kg": kg,
            }
            for mid, km, kg in zip(shift["ids"], shift["internal"], shift["waste"])
        ],
        "stops": stops,
        "d_km": d,
        "h_h": h,
    }
    if case == "transfer_station":
        doc["transfer"] = {
            "large_capacity": LARGE_CAPACITY,
            "roundtrip_to_landfill": round(2 * math.hypot(station[0] - LANDFILL[0],
                                                          station[1] - LANDFILL[1]), 2),
        }
    return doc


def ring_town():
    """17 light micro-routes on a 38 km ring road, depot and landfill adjacent.

    Large enough that the exact solver needs its bound, small enough that the
    heuristic lands in seconds; distances are measured along the ring.
    """
    nodes = 19
    step = 2.0
    ring = {"depot": 0, "landfill": 18}
    ids = list(range(1, 18))

    def ring_pos(stop_idx):  # stop order: depot, landfill, micros 1..17
        if stop_idx == 0:
            return ring["depot"]
        if stop_idx == 1:
            return ring["landfill"]
        return stop_idx - 1

    d = [[0.0] * nodes for _ in range(nodes)]
    h = [[0.0] * nodes for _ in range(nodes)]
    for a in range(nodes):
        for b in range(nodes):
            if a == b:
                continue
            gap = abs(ring_pos(a) - ring_pos(b))
            walk = step * min(gap, nodes - gap)
            d[a][b] = round(walk, 2)
            h[a][b] = round(walk / 25.0, 3)
    return {
        "case_kind": "current_situation",
        "capacity_Q": CAPACITY,
        "time_limit_T": TIME_LIMIT,
        "micro_routes": [
            {"id": mid, "internal_distance_km": 4.0, "base_waste_kg": 450.0}
            for mid in ids
        ],
        "stops": ["depot", "landfill"] + ids,
        "d_km": d,
        "h_h": h,
    }


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data"
    out.mkdir(exist_ok=True)
    files = {
        "cs_day.json": instance(DAY, "current_situation"),
        "cs_night.json": instance(NIGHT, "current_situation"),
        "ts1_day.json": instance(DAY, "transfer_station", DEPOT),
        "ts1_night.json": instance(NIGHT, "transfer_station", DEPOT),
        "ts2_day.json": instance(DAY, "transfer_station", STATION_B),
        "ts2_night.json": instance(NIGHT, "transfer_station", STATION_B),
        "ring17.json": ring_town(),
    }
    for name, doc in files.items():
        (out / name).write_text(json.dumps(doc, indent=2) + "\n")
        print(f"wrote data/{name}")


if __name__ == "__main__":
    main()
