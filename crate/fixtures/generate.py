"""Regenerates the synthetic fixtures. Output is deterministic."""
import datetime
import math
import random


def time_series(path):
    rng = random.Random(7)
    start = datetime.date(2020, 3, 1)
    n = 150
    days = [start + datetime.timedelta(d) for d in range(n)]
    header = ["Province/State", "Country/Region", "Lat", "Long"]
    header += [f"{d.month}/{d.day}/{d.year % 100}" for d in days]
    regions = [
        ("", "US", 40000, 0.08, 0.15, 0),
        ("", "Brazil", 25000, 0.07, 0.2, 10),
        ("", "India", 20000, 0.06, 0.2, 15),
        ("Ontario", "Canada", 2000, 0.09, 0.25, 5),
        ("Quebec", "Canada", 2500, 0.09, 0.25, 5),
        ("", "Germany", 6000, 0.1, 0.2, 0),
    ]
    with open(path, "w") as f:
        f.write(",".join(header) + "\n")
        for province, country, scale, growth, noise, lag in regions:
            cum, row = 0, []
            for t in range(n):
                if t >= lag:
                    level = scale / (1 + math.exp(-growth * (t - lag - 40)))
                    cum += max(0, int(round(level * 0.05 * (1 + rng.gauss(0, noise)))))
                row.append(cum)
            f.write(",".join([province, country, "0", "0"] + [str(v) for v in row]) + "\n")


def patients(path):
    rng = random.Random(11)
    # (sex, outcome, count) cells of the sex-by-outcome table
    cells = [("male", "discharged", 299), ("male", "died", 132),
             ("female", "discharged", 213), ("female", "died", 71)]
    rows = []
    for sex, outcome, count in cells:
        for _ in range(count):
            died = outcome == "died"
            age = rng.gauss(71, 13) if died else rng.gauss(46, 16)
            age = min(max(round(age), 1), 99)
            p = lambda base, extra: rng.random() < (base + extra if died else base)
            found = []
            if p(0.55, 0.15): found.append(rng.choice(["fever", "Fever 38.5°C", "feverish"]))
            if p(0.45, 0.05): found.append(rng.choice(["cough", "dry cough", "coughing"]))
            if p(0.10, 0.40): found.append("pneumonia")
            if p(0.05, 0.25): found.append(rng.choice(["shortness of breath", "dyspnea"]))
            if p(0.12, 0.05): found.append("fatigue")
            if p(0.08, -0.04): found.append("sore throat")
            if p(0.06, 0.0): found.append("headache")
            if died and rng.random() < 0.08: found.append("acute respiratory distress syndrome")
            chronic = int(rng.random() < (0.45 if died else 0.2))
            age_field = str(age)
            if rng.random() < 0.03:
                lo = age // 10 * 10
                age_field = f"{lo}-{lo + 9}"
            rows.append([age_field, sex, "; ".join(found), str(chronic), outcome])
    # incomplete records that every analysis must exclude or tolerate
    for i in range(30):
        age = str(rng.randint(20, 90)) if i % 3 else ""
        sex = "" if i % 2 else rng.choice(["male", "female"])
        outcome = rng.choice(["died", "recovered"]) if i % 2 else ""
        rows.append([age, sex, "cough" if i % 4 else "", "", outcome])
    rng.shuffle(rows)
    with open(path, "w") as f:
        f.write("id,age,sex,symptoms,chronic_disease_binary,outcome\n")
        for i, r in enumerate(rows, 1):
            text = f'"{r[2]}"' if r[2] else ""
            f.write(",".join([str(i), r[0], r[1], text, r[3], r[4]]) + "\n")


if __name__ == "__main__":
    import os
    here = os.path.dirname(os.path.abspath(__file__))
    time_series(os.path.join(here, "time_series_confirmed.csv"))
    patients(os.path.join(here, "patients.csv"))
