import csv

import pytest

# Per-location scenario scores of the full dataset: 35 rows of
# (location, occlusion, lighting, recording_angle, resolution, crowded_videos).
LOCATION_SCORE_ROWS = [
    (5, 1, 3, 2, 1, 1),
    (3, 1, 3, 2, 3, 1),
    (10, 3, 1, 1, 4, 2),
    (2, 1, 2, 4, 4, 1),
    (4, 1, 4, 4, 3, 1),
    (9, 2, 3, 3, 4, 2),
    (25, 2, 4, 2, 5, 2),
    (11, 2, 3, 5, 2, 3),
    (35, 3, 3, 5, 2, 2),
    (8, 2, 3, 5, 4, 2),
    (28, 5, 3, 3, 2, 3),
    (29, 3, 4, 3, 3, 3),
    (33, 4, 4, 2, 2, 4),
    (22, 3, 2, 5, 4, 2),
    (30, 3, 3, 5, 3, 2),
    (37, 4, 4, 4, 2, 3),
    (40, 4, 4, 4, 2, 3),
    (26, 3, 4, 4, 3, 3),
    (14, 2, 4, 5, 4, 2),
    (12, 3, 5, 3, 4, 3),
    (13, 3, 4, 4, 3, 4),
    (31, 4, 4, 4, 3, 3),
    (14, 3, 5, 4, 4, 2),
    (17, 3, 4, 5, 4, 2),
    (20, 4, 4, 3, 4, 4),
    (18, 4, 3, 5, 4, 3),
    (15, 4, 4, 5, 3, 4),
    (38, 4, 4, 5, 4, 3),
    (39, 4, 4, 5, 3, 4),
    (36, 4, 4, 5, 4, 4),
    (34, 4, 4, 5, 5, 4),
    (42, 4, 5, 5, 5, 3),
    (27, 5, 5, 5, 4, 4),
    (41, 4, 5, 5, 5, 4),
    (24, 5, 5, 5, 4, 5),
]

# Score totals of the 35 rows above (16 distinct values, 8..24).
ALL_SCORE_TOTALS = [
    8, 10, 11, 12, 13, 14, 15, 15, 15, 16, 16, 16, 16, 16, 16, 17, 17, 17,
    17, 18, 18, 18, 18, 18, 19, 19, 20, 20, 20, 21, 22, 22, 23, 23, 24,
]

PUBLISHED_SUBSET = [11, 15, 16, 17, 19, 23]


@pytest.fixture
def location_scores():
    from marathonkit.sampling import LocationScore

    return [
        LocationScore(
            location_number=loc,
            occlusion=occ,
            lighting=light,
            recording_angle=angle,
            resolution=res,
            crowded_videos=crowd,
        )
        for loc, occ, light, angle, res, crowd in LOCATION_SCORE_ROWS
    ]


@pytest.fixture
def scores_csv(tmp_path, location_scores):
    from marathonkit.sampling import save_scores_csv

    path = tmp_path / "scores.csv"
    save_scores_csv(location_scores, path)
    return path


RUNNER_CSV_HEADER = [
    "bib", "name", "gender", "countryCode",
    "cumulativeTime_5k", "cumulativeTime_10k", "cumulativeTime_15k",
    "cumulativeTime_20k", "cumulativeTime_half", "cumulativeTime_25k",
    "cumulativeTime_30k", "cumulativeTime_35k", "cumulativeTime_40k",
    "cumulativeTime_finish",
]


def write_runner_csv(path, rows):
    """rows: list of dicts keyed by RUNNER_CSV_HEADER names."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RUNNER_CSV_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    return path


@pytest.fixture
def runner_csv(tmp_path):
    return write_runner_csv(
        tmp_path / "runners.csv",
        [
            {
                "bib": 101, "name": "Hannah Smit", "gender": "F", "countryCode": "NLD",
                "cumulativeTime_5k": "0:25:00", "cumulativeTime_10k": "0:50:00",
                "cumulativeTime_15k": "1:15:00", "cumulativeTime_20k": "1:40:00",
                "cumulativeTime_half": "1:45:30", "cumulativeTime_25k": "2:05:00",
                "cumulativeTime_30k": "2:30:00", "cumulativeTime_35k": "2:55:00",
                "cumulativeTime_40k": "3:20:00", "cumulativeTime_finish": "3:30:00",
            },
            {
                "bib": 23, "name": "Annette Vos", "gender": "F", "countryCode": "NLD",
                "cumulativeTime_5k": "0:20:00", "cumulativeTime_10k": "0:40:00",
                "cumulativeTime_15k": "1:00:00", "cumulativeTime_20k": "",
                "cumulativeTime_half": "", "cumulativeTime_25k": "1:40:00",
                "cumulativeTime_30k": "2:00:00", "cumulativeTime_35k": "2:20:00",
                "cumulativeTime_40k": "2:40:00", "cumulativeTime_finish": "2:48:00",
            },
            {
                "bib": 2301, "name": "Marco Rossi", "gender": "M", "countryCode": "ITA",
                "cumulativeTime_5k": "0:22:00", "cumulativeTime_10k": "0:44:00",
                "cumulativeTime_15k": "1:06:00", "cumulativeTime_20k": "1:28:00",
                "cumulativeTime_half": "1:32:50", "cumulativeTime_25k": "1:50:00",
                "cumulativeTime_30k": "2:12:00", "cumulativeTime_35k": "2:34:00",
                "cumulativeTime_40k": "2:56:00", "cumulativeTime_finish": "3:05:00",
            },
        ],
    )


@pytest.fixture
def checkpoints_csv(tmp_path):
    path = tmp_path / "checkpoints.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["location_number", "distance_km"])
        for loc in range(1, 43):
            writer.writerow([loc, float(loc)])
    return path
