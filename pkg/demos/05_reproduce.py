# %% [markdown]
# End-to-end rerun of the published study with a discrepancy audit

# %%
from gcshi.io import emit_report
from gcshi.pipeline import reproduce

report = reproduce()
for check in report.checks:
    print("PASS" if check.passed else "FAIL", check.name, "-", check.detail)

# %%
# Printed cells whose recomputation rounds to a different two-decimal value.
for e in report.errata:
    where = "/".join(x for x in (e.row, e.column) if x)
    print(f"{e.quantity:4} {where:7} printed {e.paper:.2f} recomputed {e.recomputed:.4f}  ({e.basis})")

# %%
for note in report.provenance:
    print("-", note)

# %%
print(emit_report(report, "markdown")[:1200])
