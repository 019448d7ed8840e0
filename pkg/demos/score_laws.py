"""Score densities behind the common-source and suspect-centred SLRs.

Writes one SVG per model with the numerator and denominator laws of the
squared-difference score, and marks the score where the two densities
cross (SLR = 1).
"""

import argparse
import math
from pathlib import Path

import numpy as np

from evidentia.experiments import standard_config
from evidentia.score_slr import cs_score_context, slr_cs_crossing, ss_control_anchored_context
from evidentia.stats_core import scaled_chisq1_log_pdf
from evidentia.svgplot import density_lines


def curves(ctx, hi):
    # Start away from zero, where both densities diverge.
    x = np.linspace(hi / 400, hi, 400)
    return [("numerator (H0)", x, np.exp(scaled_chisq1_log_pdf(x, ctx.numerator_law))),
            ("denominator (H1)", x, np.exp(scaled_chisq1_log_pdf(x, ctx.denominator_law)))]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="demo_output")
    ap.add_argument("--es", type=float, default=9.3, help="observed control for the suspect-centred laws")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    p = standard_config("A").params
    cs = cs_score_context(p.as_common_source())
    cross = slr_cs_crossing(p.as_common_source())
    svg = density_lines(curves(cs, 40.0), title="Common-source score laws, Config A",
                        xlabel="score (e_u - e_s)^2", markers=[("SLR = 1", cross)])
    (out / "score_laws_cs.svg").write_text(svg)
    print(f"common source: H0 scale {cs.numerator_law.scale}, H1 scale {cs.denominator_law.scale}, "
          f"crossing at score {cross:.4f} (|e_u - e_s| = {math.sqrt(cross):.4f})")

    ss = ss_control_anchored_context(args.es, p)
    svg = density_lines(curves(ss, 60.0), title=f"Control-anchored score laws, Config A, e_s = {args.es}",
                        xlabel="score (e_u - e_s)^2")
    (out / "score_laws_ss_es.svg").write_text(svg)
    for label, law in (("H0", ss.numerator_law), ("H1", ss.denominator_law)):
        print(f"control anchored {label}: scale {law.scale:.4g}, noncentrality {law.noncentrality:.4g}")
    print(f"wrote score_laws_cs.svg and score_laws_ss_es.svg to {out}")


if __name__ == "__main__":
    main()
