# Multiple-cover values for a disc in (P^1, S^1): genus 0 closed form,
# genus 1 through a Hodge oracle, and the a <-> 1-a symmetry.
# Run: python demos/disc_multiple_covers.py

# %%
from bordered_moduli.invariants import (
    builtin_oracle_g1, c_genus0, c_genus_g, compositions, genus_le1_oracle,
    polynomial_in_a, rational_str, sign_symmetry_check,
)

# single boundary, a = 1: the familiar 1/d^2
print("C(0;1|d;d|1):", [rational_str(c_genus0(1, d, (d,), 1)) for d in range(1, 7)])

# %% dependence on the weight a for two boundary circles
for n in compositions(4, 2):
    coeffs = polynomial_in_a(2, 4, n, 2 + sum(x - 1 for x in n))
    print(n, "coefficients in a:", [rational_str(c) for c in coeffs])

# %% genus 1, one boundary circle, from the two integrals on M_{1,1}
oracle = builtin_oracle_g1()
for d in (1, 2, 3):
    print(f"d={d}:", [rational_str(c_genus_g(1, 1, d, (d,), a, oracle)) for a in range(-2, 4)])

# %% symmetry holds in genus 0 and in genus 1 with the wider oracle
wide = genus_le1_oracle()
ok0 = all(sign_symmetry_check(0, 3, 5, n, a) for n in compositions(5, 3) for a in range(-4, 6))
ok1 = all(sign_symmetry_check(1, 2, 4, n, a, wide) for n in compositions(4, 2) for a in range(-3, 5))
print("symmetry genus 0:", ok0, "| genus 1, h=2:", ok1)
