"""Closed-form dominant operation counts of hybrid-field estimators."""


def _hf_omp_gamma(N, Q_F, Q_N, L_F, L_N):
    return N * (Q_F * L_F + L_F**2) + L_F**3 + N * (Q_N * L_N + L_N**2) + L_N**3


def _hf_omp_no_gamma(N, Q_F, Q_N, L, N_gamma):
    return N * Q_F * L + N * L**2 + L**3 + N_gamma * (N * Q_N + N * L**2 + L**3 + N**2 * L)


def _hf_sd_omp(N, Q_N, L_F, L_N, O):
    return N * L_F * O**2 + (L_F * O) ** 2 + Q_N * (L_N * O) ** 3 + N * Q_N


def _hf_sgp_gamma(N, L, Q_F, Q_N):
    return N * L**2 + N * L * (Q_F + Q_N)


def _hf_sgp_no_gamma(N, Q_F, Q_N, L, N_gamma, N_iter):
    return (N * Q_F * L + N * L**2 + N_gamma * (N * Q_N + N * L**2)
            + N_iter * (N**2 + N * L**2 + L**3 + N**2 * L))


def _eps_omp_ssigw(i, N, Q, B, N_iter):
    return i * N * (Q + B * N_iter + 1)


FORMULAS = {
    "hf-omp-gamma": (_hf_omp_gamma, ("N", "Q_F", "Q_N", "L_F", "L_N")),
    "hf-omp-no-gamma": (_hf_omp_no_gamma, ("N", "Q_F", "Q_N", "L", "N_gamma")),
    "hf-sd-omp": (_hf_sd_omp, ("N", "Q_N", "L_F", "L_N", "O")),
    "hf-sgp-gamma": (_hf_sgp_gamma, ("N", "L", "Q_F", "Q_N")),
    "hf-sgp-no-gamma": (_hf_sgp_no_gamma, ("N", "Q_F", "Q_N", "L", "N_gamma", "N_iter")),
    "eps-omp-ssigw": (_eps_omp_ssigw, ("i", "N", "Q", "B", "N_iter")),
}


def required_parameters(scheme: str) -> tuple[str, ...]:
    try:
        return FORMULAS[scheme][1]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {sorted(FORMULAS)}") from None


def complexity_eval(scheme: str, params: dict) -> float:
    """Evaluate the operation-count formula of ``scheme``.

    ``Q`` defaults to ``Q_F + Q_N`` when only the block sizes are given.
    """
    names = required_parameters(scheme)
    params = dict(params)
    if "Q" not in params and "Q_F" in params and "Q_N" in params:
        params["Q"] = params["Q_F"] + params["Q_N"]
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"{scheme} needs parameters {missing}")
    func = FORMULAS[scheme][0]
    return float(func(**{n: params[n] for n in names}))
