#!/usr/bin/env python3
"""Writes the synthetic sandbox and its 20-query corpus under fixtures/synthetic.

Every city has flights to every other city on every date, ground routes in
both directions, hotels of every room type without house rules, and enough
restaurants and attractions for a week-long trip, so each query is feasible.
"""

import csv
import datetime as dt
import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures" / "synthetic"
CITIES = ["Ashford", "Brookvale", "Corbin", "Dunmore", "Elmstead", "Fairhaven"]
START = dt.date(2022, 5, 1)
N_DATES = 14
CUISINES = ["American", "Chinese", "French", "Indian", "Italian", "Mediterranean", "Mexican", "Thai"]
ADJ = ["Golden", "Rustic", "Blue", "Little", "Olive", "Copper", "Silver", "Green", "Royal", "Cozy"]
NOUN = ["Spoon", "Table", "Kitchen"]
SIGHTS = ["Museum", "Park", "Gardens", "Harbor", "Gallery", "Tower", "Market", "Cathedral", "Zoo",
          "Aquarium", "Theater", "Library"]


def write(name, header, rows):
    with open(OUT / name, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(7)

    flights, n = [], 0
    for o in CITIES:
        for d in CITIES:
            if o == d:
                continue
            for k in range(N_DATES):
                date = START + dt.timedelta(days=k)
                for dep_h in (7, 15):
                    n += 1
                    price = 60 + rng.randrange(0, 240)
                    minute = rng.randrange(0, 60)
                    arr_h = dep_h + 1
                    arr_m = minute + 35
                    if arr_m >= 60:
                        arr_h, arr_m = arr_h + 1, arr_m - 60
                    flights.append([f"F{n:05d}", price, f"{dep_h:02d}:{minute:02d}", f"{arr_h:02d}:{arr_m:02d}",
                                    "1 hours 35 minutes", date.isoformat(), o, d, 450])
    write("flights.csv", ["Flight Number", "Price", "DepTime", "ArrTime", "ActualElapsedTime", "FlightDate",
                          "OriginCityName", "DestCityName", "Distance"], flights)

    hotels = []
    for i, c in enumerate(CITIES):
        hotels += [
            [f"{c} Budget Room", 60 + 3 * i, "Private room", "", 1, 2, 4.1, c],
            [f"{c} Shared Bunk", 30 + 2 * i, "Shared room", "No parties", 1, 1, 3.2, c],
            [f"{c} Garden Home", 120 + 5 * i, "Entire home/apt", "", 1, 5, 4.6, c],
            [f"{c} Lake House", 90 + 4 * i, "Entire home/apt", "No pets & No smoking", 1, 4, 4.4, c],
            [f"{c} Longstay Flat", 40 + i, "Entire home/apt", "", 30, 4, 3.9, c],
            [f"{c} Grand Palace", 3000, "Entire home/apt", "", 1, 10, 5.0, c],
        ]
    write("accommodations.csv", ["NAME", "price", "room type", "house_rules", "minimum nights",
                                 "maximum occupancy", "review rate number", "city"], hotels)

    restaurants = []
    for c in CITIES:
        j = 0
        for a in ADJ:
            for b in NOUN:
                cuisines = f"{CUISINES[j % 8]}, {CUISINES[(j * 3 + 1) % 8]}"
                if CUISINES[j % 8] == CUISINES[(j * 3 + 1) % 8]:
                    cuisines = CUISINES[j % 8]
                restaurants.append([f"{a} {b} {c}", 8 + rng.randrange(0, 45), cuisines,
                                    round(3 + rng.random() * 2, 1), c])
                j += 1
    write("restaurants.csv", ["Name", "Average Cost", "Cuisines", "Aggregate Rating", "City"], restaurants)

    attractions = []
    for i, c in enumerate(CITIES):
        for k, s in enumerate(SIGHTS):
            attractions.append([f"{c} {s}", 40 + i + k / 100, -80 - i - k / 100, f"{k + 1} Main St, {c}",
                                f"555-01{i}{k:02d}", f"https://example.org/{c.lower()}/{s.lower()}", c])
    write("attractions.csv", ["Name", "Latitude", "Longitude", "Address", "Phone", "Website", "City"], attractions)

    distances = []
    for i, o in enumerate(CITIES):
        for j, d in enumerate(CITIES):
            if o != d:
                miles = 150 + 40 * abs(i - j) + 7 * (i + j)
                distances.append([o, d, miles, miles + miles // 5, "self-driving;taxi"])
    write("distances.csv", ["origin_city", "dest_city", "distance", "duration", "available_modes"], distances)

    constraints = [
        None,
        {"room type": "entire room"},
        {"room type": "private room", "house rule": "pets"},
        {"cuisine": ["Mexican", "Thai"]},
        {"transportation": "no flight"},
        {"transportation": "no self-driving", "cuisine": ["Indian"]},
        {"room type": "not shared room", "house rule": "smoking"},
        {"room type": "shared room", "transportation": "no taxi"},
        {"house rule": "parties", "cuisine": ["French", "Chinese", "Italian"]},
        {"room type": "entire room", "house rule": "visitors", "cuisine": ["American"], "transportation": "no flight"},
    ]
    shapes = [(3, 1), (5, 2), (7, 3), (3, 1), (5, 1)]
    queries = []
    for k in range(20):
        days, cities = shapes[k % len(shapes)]
        org = CITIES[k % len(CITIES)]
        dest = CITIES[(k * 5 + 2) % len(CITIES)]
        if dest == org:
            dest = CITIES[(CITIES.index(org) + 1) % len(CITIES)]
        people = 1 + k % 4
        start = START + dt.timedelta(days=k % (N_DATES - days + 1))
        queries.append({
            "org": org,
            "dest": dest,
            "days": days,
            "visiting_city_number": cities,
            "people_number": people,
            "local_constraint": constraints[k % len(constraints)],
            "budget": 1000 * days * people,
            "date": [(start + dt.timedelta(days=i)).isoformat() for i in range(days)],
        })
    with open(OUT / "queries.jsonl", "w") as f:
        for q in queries:
            f.write(json.dumps(q) + "\n")


if __name__ == "__main__":
    main()
