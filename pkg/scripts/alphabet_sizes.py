"""Database size searchable with certainty for a given number of queries."""

from dataclasses import dataclass

from quantumbio.code_tables import alphabet_summary
from quantumbio.search_core import classical_query_counts, optimal_queries


@dataclass
class Config:
    q_max: int = 6
    sizes: tuple[int, ...] = (4, 16, 64, 256, 1024)


def main(cfg: Config = Config()) -> None:
    print("Q  exact_N    rounded  note")
    for row in alphabet_summary(cfg.q_max):
        q = "-" if row.queries is None else row.queries
        print(f"{q:<2} {row.exact_n:<10.4f} {row.rounded_alphabet:<8} {row.interpretation}")
    print("\nN      quantum  classical(mean)")
    for n in cfg.sizes:
        print(f"{n:<6} {optimal_queries(n).q_int:<8} {classical_query_counts(n)}")


if __name__ == "__main__":
    main()
