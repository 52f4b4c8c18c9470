"""Regenerate tests/golden. Review the diff before committing new goldens."""

from pathlib import Path

from nafil.catalog import builtin
from nafil.identities import property_report
from nafil.io import emit_report, write_table
from nafil.iso import canonical_form

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    GOLDEN.mkdir(exist_ok=True)
    for name in ("L5", "L6", "LSAIP9", "RSAIP9"):
        t = builtin(name)
        r = property_report(t)
        (GOLDEN / f"{name}.report.txt").write_text(emit_report(r, "text"))
        (GOLDEN / f"{name}.report.json").write_text(emit_report(r, "machine"))
        (GOLDEN / f"{name}.table.txt").write_text(write_table(t))
        (GOLDEN / f"{name}.canonical.txt").write_text(write_table(canonical_form(t)))
    print(f"wrote goldens to {GOLDEN}")


if __name__ == "__main__":
    main()
