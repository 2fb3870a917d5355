"""Pick a representative subset of camera locations.

Each of the 35 candidate filming locations is scored 1-5 on five conditions
(lighting, resolution, recording angle, occlusion, crowdedness) and the
totals form a score distribution. We want a small subset of locations whose
score distribution is statistically indistinguishable from the full set, as
judged by a two-sample Kolmogorov-Smirnov test.

Run: python3 demos/location_sampling_demo.py
"""

from marathonkit import sampling

ALL_SCORES = [
    8, 10, 11, 12, 13, 14, 15, 15, 15,
    16, 16, 16, 16, 16, 16,
    17, 17, 17, 17,
    18, 18, 18, 18, 18,
    19, 19, 20, 20, 20, 21, 22, 22, 23, 23, 24,
]


def main():
    print(f"{len(ALL_SCORES)} candidate locations; "
          f"{len(set(ALL_SCORES))} distinct score totals\n")

    critical = sampling.ks_critical_value(len(ALL_SCORES), 6, c_alpha=1.63)
    print(f"KS critical value at alpha=0.01 for (35, 6): {critical:.4f}")

    # A hand-picked subset: does it survive the test?
    hand_picked = [11, 15, 16, 17, 19, 23]
    ks = sampling.ks_statistic(ALL_SCORES, hand_picked)
    verdict = "accepted" if ks < critical else "rejected"
    print(f"hand-picked subset {hand_picked}: D = {ks:.4f} -> {verdict}\n")

    # Exhaustive search over every 6-of-16 distinct-score combination.
    best = sampling.select_sample_scores(ALL_SCORES, k=6, c_alpha=1.63, exhaustive=True)
    print(f"best subset by exhaustive search: {best['subset']}")
    print(f"  D = {best['ks'].statistic:.4f} "
          f"(vs hand-picked {ks:.4f}) -> accepted: {best['ks'].accepted}")


if __name__ == "__main__":
    main()
