"""A closed System F term of type D that F0 cannot type."""
from sysfdata import witnesses
from sysfdata.classifiers import D_TYPE, is_forall_positive
from sysfdata.derivation import check_derivation_f
from sysfdata.parsing import print_term as show_term, print_type as show_type
from sysfdata.syntax import Context
from sysfdata.systems import check_f0

d = witnesses.load("d_separation")
print("D         =", show_type(D_TYPE))
print("term      =", show_term(d.term))
print("forall+   :", is_forall_positive(D_TYPE))
print("F accepts :", check_derivation_f(d))
print("F0 accepts:", check_f0(Context(), d.term, D_TYPE))
