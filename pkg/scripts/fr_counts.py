"""Edge counts of the product scenarios for small binary components,
next to the closed-form counts."""

from pprog.scenario import component_scenario, direct_product, fr_oneway, fr_product


def main():
    print(" m  n  |V|  direct  oneway  FR  FR formula")
    for m in range(1, 4):
        for n in range(1, 4):
            xa = component_scenario([f"A{i}" for i in range(m)])
            xb = component_scenario([f"B{j}" for j in range(n)])
            fr = fr_product(xa, xb)
            formula = m * n**2 + n * m**2 - m * n
            print(
                f"{m:2} {n:2} {len(fr.vertices):4} {len(direct_product(xa, xb).edges):7}"
                f" {len(fr_oneway(xa, xb).edges):7} {len(fr.edges):3} {formula:11}"
            )


if __name__ == "__main__":
    main()
