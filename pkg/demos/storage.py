"""Compare a numeral storage operator with one that copies its input."""
from sysfdata import witnesses
from sysfdata.parsing import parse_term
from sysfdata.storage import nat_spec, run_storage, substituting_operator

spec = nat_spec(4)
good = witnesses.load("storage_operator_n").term
bad = substituting_operator(parse_term(r"x \z. z"))

for name, op in (("storage", good), ("copying", bad)):
    rep = run_storage(op, spec, 50_000)
    print(f"{name:8} verdict={rep.verdict} insensitive={rep.presentation_insensitive}")
    for v in rep.values:
        print(f"  {v.label}: {len(v.runs)} presentations, insensitive={v.presentation_insensitive}")
