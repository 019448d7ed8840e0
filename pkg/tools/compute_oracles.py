"""Independent reference values for the test suite.

Nothing here imports evidentia.  Values come from quadrature, closed forms
written out by hand, and plain Monte Carlo with numpy's default generator.
The printed numbers are frozen into the tests; rerun with ``--full`` to
use the large simulation sizes (slow).
"""

import argparse
import json
import math

import numpy as np
from scipy import integrate, optimize, stats


def chunks(total, size=10**7):
    done = 0
    while done < total:
        n = min(size, total - done)
        yield n
        done += n


def hist_density(sampler, x, half_width, total, rng):
    """Fraction of draws within x +/- half_width, divided by the bin width."""
    hits = 0
    for n in chunks(total):
        hits += np.count_nonzero(np.abs(sampler(rng, n) - x) <= half_width)
    return hits / total / (2 * half_width), math.sqrt(hits) / total / (2 * half_width)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true", help="10^8 draws where requested")
    args = ap.parse_args()
    rng = np.random.default_rng(20240611)
    out = {}

    # Normal density at x=1, mean 0, variance 2.
    sd = math.sqrt(2.0)
    cdf_diff = lambda h: (stats.norm.cdf(1 + h, 0, sd) - stats.norm.cdf(1 - h, 0, sd)) / (2 * h)
    quad = integrate.quad(lambda t: stats.norm.pdf(t, 0, sd), 1 - 1e-4, 1 + 1e-4)[0] / 2e-4
    mc, mc_se = hist_density(lambda r, n: r.normal(0, sd, n), 1.0, 0.01, 10**7, rng)
    out["normal_pdf_1_0_2"] = {"quad": quad, "cdf_diff": cdf_diff(1e-5), "mc": mc, "mc_se": mc_se}

    # Bivariate normal H0 law at (10, 10).
    cov = np.array([[12.0, 10.0], [10.0, 11.0]])
    chol = np.linalg.cholesky(cov)
    h = 0.05
    hits = 0
    for n in chunks(10**7):
        z = rng.standard_normal((n, 2)) @ chol.T
        hits += np.count_nonzero((np.abs(z[:, 0]) <= h) & (np.abs(z[:, 1]) <= h))
    out["bvn_pdf_10_10"] = {"mc": hits / 10**7 / (2 * h) ** 2,
                            "mc_se": math.sqrt(hits) / 10**7 / (2 * h) ** 2,
                            "scipy": float(stats.multivariate_normal([10, 10], cov).pdf([10, 10]))}

    # Central chi-squared(1) density at 1 from the derivative of 2*Phi(sqrt(x)) - 1.
    F = lambda x: 2 * stats.norm.cdf(math.sqrt(x)) - 1
    out["chisq1_pdf_1"] = {"cdf_diff": (F(1 + 1e-5) - F(1 - 1e-5)) / 2e-5,
                           "quad_norm": integrate.quad(lambda t: math.exp(-t / 2) / math.sqrt(2 * math.pi * t),
                                                       0, np.inf)[0]}

    # Noncentral, lambda=4: histogram of (Z + 2)^2.
    edges = np.linspace(0.05, 20.0, 400)
    counts = np.zeros(edges.size - 1)
    for n in chunks(10**7):
        counts += np.histogram((rng.standard_normal(n) + 2) ** 2, bins=edges)[0]
    dens = counts / 10**7 / np.diff(edges)
    bin_avg = np.array([integrate.quad(lambda t: stats.ncx2.pdf(t, 1, 4), a, b)[0] / (b - a)
                        for a, b in zip(edges[:-1], edges[1:])])
    se = np.sqrt(counts) / 10**7 / np.diff(edges)
    out["ncx2_hist"] = {"sup_dev_over_se": float(np.max(np.abs(dens - bin_avg) / np.maximum(se, 1e-12))),
                        "sup_dev": float(np.max(np.abs(dens - bin_avg)))}

    # Median of chi-squared(1) by root finding on the closed-form CDF.
    out["chisq1_median"] = optimize.brentq(lambda x: F(x) - 0.5, 0.1, 2.0, xtol=1e-15)

    # Specific-source LR at e_u = 0 with mu=10, mu_d=0, var_d=10, var_u=2.
    num = stats.norm.pdf(0, 0, math.sqrt(2))
    den = stats.norm.pdf(0, 10, math.sqrt(12))
    n_draw = 10**8 if args.full else 10**7
    hw = 0.02
    h0, _ = hist_density(lambda r, n: r.normal(0, math.sqrt(2), n), 0.0, hw, n_draw, rng)
    h1, _ = hist_density(lambda r, n: 10 + r.normal(0, math.sqrt(10), n) + r.normal(0, math.sqrt(2), n),
                         0.0, hw, n_draw, rng)
    out["lr_ss_eu0"] = {"closed": math.sqrt(6) * math.exp(25 / 6), "density_ratio": num / den,
                        "mc_ratio": h0 / h1, "n_draw": n_draw}

    # Common-source LR sign at e_u1 = e_u2 = mu, var_d=10, var_u1=var_u2=2, by quadrature.
    # Joint density under H0 integrates the shared source effect out.
    joint = integrate.quad(lambda d: stats.norm.pdf(d, 10, math.sqrt(10)) * stats.norm.pdf(10, d, math.sqrt(2)) ** 2,
                           -np.inf, np.inf)[0]
    marg = stats.norm.pdf(10, 10, math.sqrt(12)) ** 2
    out["lr_cs_at_mean"] = joint / marg

    # Common-source SLR at one score: closed form by hand and MC histogram ratio.
    s_obs = 10.0
    s0, s1 = 3.0, 23.0
    closed = stats.chi2.pdf(s_obs / s0, 1) / s0 / (stats.chi2.pdf(s_obs / s1, 1) / s1)
    hw = 0.1
    a, _ = hist_density(lambda r, n: s0 * r.standard_normal(n) ** 2, s_obs, hw, 10**7, rng)
    b, _ = hist_density(lambda r, n: (r.normal(0, math.sqrt(10), n) + r.normal(0, math.sqrt(2), n)
                                      - r.normal(0, math.sqrt(10), n) - r.normal(0, 1, n)) ** 2,
                        s_obs, hw, 10**7, rng)
    out["slr_cs_s10"] = {"closed": closed, "mc_ratio": a / b}

    # FRStat at one score, Config A parameters, e_s = 9.3, e_u = 8.0 by quadrature.
    e_s, e_u = 9.3, 8.0
    s = (e_u - e_s) ** 2
    lam0, sc0 = (9 - e_s) ** 2 / 2, 2.0
    lam1, sc1 = (10 - e_s) ** 2 / 12, 12.0
    pdf0 = lambda x: stats.ncx2.pdf(x / sc0, 1, lam0) / sc0
    pdf1 = lambda x: stats.ncx2.pdf(x / sc1, 1, lam1) / sc1
    alpha = 1 - integrate.quad(pdf0, 0, s, limit=200)[0]
    beta = integrate.quad(pdf1, 0, s, limit=200)[0]
    out["frstat_A"] = {"e_s": e_s, "e_u": e_u, "score": s, "alpha": alpha, "beta": beta, "ratio": alpha / beta}

    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
