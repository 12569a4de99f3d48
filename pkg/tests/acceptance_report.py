"""Collects one verdict per acceptance criterion for the end-of-run summary."""

RESULTS: dict[int, tuple[bool, str, str]] = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[number] = (ok, title, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})")
