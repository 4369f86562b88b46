"""Named parameter sets for the standard runs.

Every preset expands to a list of run configurations (variants).  Energies
are in units of t; times in units of 1/t.
"""

from __future__ import annotations

from dataclasses import dataclass

from .runner import RunConfig, apply_overrides


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    variants: tuple[dict, ...]

    def configs(self, overrides: list[str] | None = None) -> list[RunConfig]:
        """Variant configurations, named ``<preset>-<variant>``, with overrides applied."""
        return [
            RunConfig.from_dict(apply_overrides({**v, "name": f"{self.name}-{v['name']}"}, overrides or []))
            for v in self.variants
        ]


def _params(delta_eps=20.0, delta=0.0, gamma=0.0, v=0.0):
    return {"delta_eps": delta_eps, "t_hop": 1.0, "v_int": v, "delta_pair": delta, "gamma_single": gamma}


def _run(name, kind, size, params, t_max, n_steps, **extra):
    cfg = {"name": name, "graph": {"kind": kind, "size": size}, "params": params,
           "grid": {"t_max": t_max, "n_steps": n_steps}}
    cfg.update(extra)
    return cfg


CHAIN_SPREAD = ["sigma", "mean_n", "ipr", "distribution", "classical"]


def _fig1_upper():
    out = [_run("ballistic", "chain", 41, _params(), 15, 1500, observables=CHAIN_SPREAD)]
    for de in (10.0, 20.0):
        out.append(_run(f"delta1-de{de:g}", "chain", 41, _params(de, delta=1.0), 15, 1500,
                        observables=CHAIN_SPREAD))
    return out


def _fig1_lower():
    out = [_run("ballistic", "chain", 41, _params(), 15, 1500, observables=CHAIN_SPREAD)]
    for v in (1.0, -1.0):
        out.append(_run(f"delta1-v{v:+g}", "chain", 41, _params(20.0, delta=1.0, v=v), 15, 1500,
                        observables=CHAIN_SPREAD))
    return out


def _fig2():
    out = []
    for sectors in ([1], [1, 3], [1, 3, 5]):
        tag = "".join(map(str, sectors))
        out.append(_run(f"n{tag}", "chain", 19, _params(20.0, delta=1.0), 10, 1000,
                        sectors=sectors, observables=CHAIN_SPREAD))
    for sectors in ([1], [1, 3]):
        tag = "".join(map(str, sectors))
        out.append(_run(f"disordered-n{tag}", "chain", 19, _params(20.0, delta=1.0), 100, 400,
                        sectors=sectors, disorder={"strength": 10.0, "realizations": 50, "seed": 2},
                        observables=["ipr", "distribution"]))
    return out


def _fig3():
    return [
        _run("ballistic", "chain", 41, _params(), 15, 1500, observables=CHAIN_SPREAD),
        _run("gamma1", "chain", 41, _params(20.0, gamma=1.0), 15, 1500, observables=CHAIN_SPREAD),
        _run("delta1", "chain", 41, _params(20.0, delta=1.0), 15, 1500, observables=CHAIN_SPREAD),
    ]


def _fig4_upper():
    return [
        _run(f"delta{d:g}", "chain", 41, _params(20.0, delta=d), 100, 400,
             disorder={"strength": 10.0, "realizations": 100, "seed": 4},
             observables=["ipr", "distribution"])
        for d in (1.0, 0.5, 0.1)
    ]


def _fig4_lower():
    return [
        _run(f"w{w:g}-delta{d:g}", "chain", 41, _params(20.0, delta=d), 100, 400,
             disorder={"strength": w, "realizations": 100, "seed": 4}, observables=["ipr"])
        for d in (0.0, 1.0)
        for w in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
    ]


def _tree_variants(prefix, t_max, n_steps, **extra):
    out = [_run(f"{prefix}delta0", "binary_tree", 5, _params(), t_max, n_steps, **extra)]
    for de in (10.0, 20.0):
        out.append(_run(f"{prefix}delta1-de{de:g}", "binary_tree", 5, _params(de, delta=1.0),
                        t_max, n_steps, **extra))
    return out


def _fig6():
    return _tree_variants(
        "", 30, 3000,
        observables=["sigma", "mean_n", "distribution", "l1_uniform"],
        layers=[5],
        mixing={"target": "uniform", "eps": 0.5},
    )


def _fig7():
    return _tree_variants("", 500, 10000, observables=["mean_n"], stationary=True)


def _glued(name, params, disorder=None, layers=(3, 6), observables=("mean_n", "distribution")):
    cfg = _run(name, "glued_tree", 4, params, 30, 1500, layers=list(layers), observables=list(observables))
    if disorder:
        cfg["disorder"] = disorder
    return cfg


def _fig9():
    dis = {"strength": 5.0, "realizations": 100, "seed": 9}
    out = [_glued("ideal-delta0", _params())]
    out += [_glued(f"ideal-delta1-de{de:g}", _params(de, delta=1.0)) for de in (10.0, 20.0)]
    out.append(_glued("w5-delta0", _params(), dis))
    out += [_glued(f"w5-delta1-de{de:g}", _params(de, delta=1.0), dis) for de in (10.0, 20.0)]
    return out


def _fig10():
    dis = {"strength": 5.0, "realizations": 100, "seed": 9}
    return [
        _glued("delta0", _params(), dis, layers=range(7)),
        _glued("delta1-de10", _params(10.0, delta=1.0), dis, layers=range(7)),
        _glued("delta1-de20", _params(20.0, delta=1.0), dis, layers=range(7)),
    ]


def _smoke():
    return [_run("smoke", "chain", 5, _params(), 5, 100, sectors=[1], observables=CHAIN_SPREAD)]


def _effective():
    return [
        _run(f"delta{d:g}", "chain", 15, _params(20.0, delta=d), 10, 1000, sectors=[1, 3], effective=True)
        for d in (0.5, 0.2, 0.1)
    ]


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset("smoke", "5-site tight-binding sanity run (one-particle sector)", tuple(_smoke())),
        Preset("fig1-upper", "chain N=41: sigma and <n> for Delta=t, Delta_eps in {10,20}, plus ballistic",
               tuple(_fig1_upper())),
        Preset("fig1-lower", "chain N=41: Delta=t, Delta_eps=20, v=+1/-1, plus ballistic", tuple(_fig1_lower())),
        Preset("fig2", "chain N=19: truncation {1}, {1,3}, {1,3,5}; disordered w=10, R=50 distributions",
               tuple(_fig2())),
        Preset("fig3", "chain N=41, Delta_eps=20: (Delta=0, gamma=t) vs (Delta=t, gamma=0)", tuple(_fig3())),
        Preset("fig4-upper", "chain N=41, w=10, R=100: averaged distributions for Delta in {1, 1/2, 1/10}",
               tuple(_fig4_upper())),
        Preset("fig4-lower", "chain N=41, R=100: long-time IPR vs w for Delta in {0, t}", tuple(_fig4_lower())),
        Preset("fig6", "binary tree G5 from the root: sigma, last-layer probability, L1 to uniform",
               tuple(_fig6())),
        Preset("fig7", "binary tree G5: stationary distributions for Delta=0 and Delta=t, Delta_eps in {10,20}",
               tuple(_fig7())),
        Preset("fig9", "glued tree GBT4: layer-3 and bottom-node probability, ideal and w=5, R=100",
               tuple(_fig9())),
        Preset("fig10", "glued tree GBT4, w=5, R=100: averaged layer populations", tuple(_fig10())),
        Preset("effective", "chain N=15: full model vs effective next-nearest-neighbour model", tuple(_effective())),
    ]
}


def list_presets() -> list[Preset]:
    return list(PRESETS.values())


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
