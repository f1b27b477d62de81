"""Turn an alpha-containing inhabitant of N -> N into a refuted input."""
from sysfdata import witnesses
from sysfdata.classifiers import NAT
from sysfdata.parsing import print_term as show_term
from sysfdata.syntax import Arrow
from sysfdata.typelab import SearchBudget, probe_output, refute_input_via_output

nn = Arrow(NAT, NAT)
w = witnesses.load("nat_alpha_witness")
verdict = probe_output(nn, SearchBudget(4), witnesses=[(w.term, w)])
print("output counterexample:", show_term(verdict.term))

ref = refute_input_via_output(nn, w.term, w)
print("n =", ref.n)
print("input term u =", show_term(ref.u))
print("F0 rejects u:", ref.f0_rejects)
