"""Scratch calibration phase 3: run builtin jobs, print key report numbers."""
import sys
import traceback

from ratph.builtin_jobs import BUILTIN_JOBS
from ratph.jobs import run_job

only = sys.argv[1:]
for name in BUILTIN_JOBS:
    if only and not any(s in name for s in only):
        continue
    cfg = BUILTIN_JOBS[name]()
    try:
        rep = run_job(cfg)
    except Exception as exc:
        print("%-28s ERROR %s" % (name, exc))
        traceback.print_exc()
        continue
    print(
        "%-28s %-10s dim=%-3d E=%-12s L=%-12s sL=%-12s val=%-12s it=%-4s verified=%s"
        % (
            name,
            rep.status,
            rep.dim or -1,
            "%.4f" % rep.energy if rep.energy is not None else "-",
            "%.4f" % rep.arclength if rep.arclength is not None else "-",
            "%.4f" % rep.signed_arclength if rep.signed_arclength is not None else "-",
            "%.6g" % rep.value if rep.value is not None else "-",
            rep.iterations,
            rep.verified,
        )
    )
    if rep.verify_notes:
        print("    notes:", rep.verify_notes)
    if rep.status != "optimal":
        print("    infeasibility:", rep.infeasibility)
