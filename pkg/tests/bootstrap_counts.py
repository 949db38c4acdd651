"""Write golden/enumeration_counts.json from the naive generate-and-test oracle.

Run once by hand (python tests/bootstrap_counts.py); the fast enumerator is
tested against the committed file.
"""

import json
from collections import Counter
from pathlib import Path

from respos.enumeration import naive_enumerate

SIZES = (1, 2, 3)
TARGET = Path(__file__).parent / "golden" / "enumeration_counts.json"


def order_key(rel) -> str:
    """Strict pairs of the flattened canonical order, e.g. "0<1,0<2"."""
    n = round(len(rel) ** 0.5)
    return ",".join(f"{x}<{y}" for x in range(n) for y in range(n)
                    if x != y and rel[x * n + y]) or "antichain"


def counts(n: int) -> dict:
    forms = naive_enumerate(n)
    per_order = Counter(order_key(rel) for rel, _ in forms)
    return {"total": len(forms), "by_order": dict(sorted(per_order.items()))}


def main():
    doc = {"source": "naive generate-and-test", "sizes": {str(n): counts(n) for n in SIZES}}
    TARGET.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(TARGET.read_text(encoding="utf-8"))


if __name__ == "__main__":
    main()
