"""Experiment runners behind the CLI subcommands.

Each runner takes an ``ExperimentConfig`` and returns a ``Table``; nothing here
touches files or draws random numbers, so identical configs give identical
tables.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from . import fockoracle, systems, targets
from .combinat import bell, catalan, enumerate_nc_partitions, enumerate_set_partitions, is_noncrossing
from .config import ExperimentConfig
from .cumulants import free_cumulant
from .errors import ConfigError, ResourceLimitError
from .space import total_mass

MOMENT_COLUMNS = ["word", "V", "N_or_alpha", "value_exact", "value_decimal",
                  "limit_exact", "error_decimal", "order_estimate"]
ORACLE_COLUMNS = ["check", "word", "N_or_alpha", "value", "oracle_value", "discrepancy"]
PARTITION_COLUMNS = ["n", "partition", "num_blocks", "noncrossing"]

# desk-scale bounds for the oracle sweep
ORACLE_MAX_PARTICLES = 3
ORACLE_MAX_WORD = 5
ORACLE_MAX_CELLS = 3


@dataclass
class Table:
    columns: list[str]
    rows: list[list[str]] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def decimal_str(x: Fraction, digits: int = 20) -> str:
    """Decimal rendering with ``digits`` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def word_str(word) -> str:
    return " ".join(word)


def _trace_fn(cfg: ExperimentConfig):
    if cfg.count == "fixed":
        return systems.centered_fixed_n_trace if cfg.centered else systems.fixed_n_trace
    return systems.centered_poissonized_trace if cfg.centered else systems.poissonized_trace


def _limit_fn(cfg: ExperimentConfig):
    return targets.centered_levy_moment if cfg.centered else targets.levy_moment


def _count_for(cfg: ExperimentConfig, v_eff: Fraction, explicit: bool):
    if cfg.count == "fixed":
        n = cfg.N if (explicit and cfg.N is not None) else round(cfg.rho * v_eff)  # ties to even
        if n < 1:
            raise ConfigError(f"$.rho: particle number rounds to {n} at V={v_eff}")
        return systems.FixedN(n), Fraction(n)
    alpha = cfg.alpha if (explicit and cfg.alpha is not None) else cfg.rho * v_eff
    return systems.PoissonAlpha(alpha), alpha


def _values(cfg: ExperimentConfig, space, explicit: bool):
    """(V, N or alpha, [(value, limit)] per word) for one space."""
    probe = systems.ParticleSystemSpec(space, systems.FixedN(1), cfg.jumps)
    v_eff = systems.effective_volume(probe)
    count, shown = _count_for(cfg, v_eff, explicit)
    spec = systems.ParticleSystemSpec(space, count, cfg.jumps)
    trace, limit = _trace_fn(cfg), _limit_fn(cfg)
    out = []
    for word in cfg.words:
        fs = cfg.word_functions(word)
        out.append((trace(spec, fs), limit(space, cfg.jumps, fs)))
    return v_eff, shown, out


def run_moments(cfg: ExperimentConfig) -> Table:
    v, shown, vals = _values(cfg, cfg.space, explicit=True)
    table = Table(MOMENT_COLUMNS)
    for word, (value, lim) in zip(cfg.words, vals):
        table.rows.append([word_str(word), str(v), str(shown), str(value), decimal_str(value),
                           str(lim), decimal_str(abs(value - lim)), ""])
    return table


def scaled_space(cfg: ExperimentConfig, factor: Fraction):
    """Grow the bulk cell so that sigma(Lambda) = factor * (base sigma(Lambda))."""
    base = total_mass(cfg.space)
    b = cfg.space.index(cfg.bulk)
    bulk_mass = factor * base - (base - cfg.space.sigma_mass[b])
    if bulk_mass < 0:
        raise ConfigError(f"$.schedule: factor {factor} would make the bulk mass negative")
    return cfg.space.with_mass(cfg.bulk, bulk_mass)


def order_estimate(e_prev: Fraction, e_next: Fraction, v_prev: Fraction, v_next: Fraction) -> float | None:
    """log(e(V)/e(cV)) / log c; None when either error vanishes."""
    if e_prev == 0 or e_next == 0:
        return None
    return math.log(e_prev / e_next) / math.log(v_next / v_prev)


def run_converge(cfg: ExperimentConfig, threads: int = 1) -> Table:
    spaces = [scaled_space(cfg, c) for c in cfg.schedule]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        points = list(pool.map(lambda sp: _values(cfg, sp, explicit=False), spaces))
    table = Table(MOMENT_COLUMNS)
    for w, word in enumerate(cfg.words):
        prev = None
        for v, shown, vals in points:
            value, lim = vals[w]
            err = abs(value - lim)
            order = ""
            if prev is not None:
                p = order_estimate(prev[1], err, prev[0], v)
                order = "" if p is None else f"{p:.6f}"
            table.rows.append([word_str(word), str(v), str(shown), str(value), decimal_str(value),
                               str(lim), decimal_str(err), order])
            prev = (v, err)
    return table


def _all_words(names, max_len):
    for k in range(1, max_len + 1):
        yield from itertools.product(names, repeat=k)


def run_oracle_check(cfg: ExperimentConfig) -> Table:
    o = cfg.oracle
    if o.max_particles > ORACLE_MAX_PARTICLES:
        raise ResourceLimitError(f"max_particles {o.max_particles} > {ORACLE_MAX_PARTICLES}")
    if o.max_word_length > ORACLE_MAX_WORD:
        raise ResourceLimitError(f"max_word_length {o.max_word_length} > {ORACLE_MAX_WORD}")
    if len(cfg.space) > ORACLE_MAX_CELLS:
        raise ResourceLimitError(f"{len(cfg.space)} cells > {ORACLE_MAX_CELLS}")
    if o.poisson_max_word_length > 3 or o.freeness_max_word_length > 4:
        raise ResourceLimitError("Poissonized words are capped at 3 letters, freeness words at 4")

    sp, jm = cfg.space, cfg.jumps
    names = list(cfg.functions)
    words = cfg.words or list(_all_words(names, o.max_word_length))
    words = [w for w in words if len(w) <= o.max_word_length]
    table = Table(ORACLE_COLUMNS)
    exact_max = Fraction(0)
    float_max = 0.0

    def add(check, word, count, value, oracle_value, disc):
        table.rows.append([check, word_str(word), str(count), str(value), str(oracle_value), str(disc)])

    for N in range(1, o.max_particles + 1):
        spec = systems.ParticleSystemSpec(sp, systems.FixedN(N), jm)
        for word in words:
            fs = cfg.word_functions(word)
            a = systems.fixed_n_trace(spec, fs)
            b = fockoracle.free_product_vacuum_expectation(sp, N, fs, jumps=jm)
            exact_max = max(exact_max, abs(a - b))
            add("fixed_n", word, N, a, b, abs(a - b))

    for word in words:
        fs = cfg.word_functions(word)
        a = targets.levy_moment(sp, jm, fs)
        b = fockoracle.fock_vacuum_expectation(sp, jm, fs)
        exact_max = max(exact_max, abs(a - b))
        add("limit", word, "", a, b, abs(a - b))

    for alpha in o.alphas:
        spec = systems.ParticleSystemSpec(sp, systems.PoissonAlpha(alpha), jm)
        for word in _all_words(names, o.poisson_max_word_length):
            fs = cfg.word_functions(word)
            a = systems.poissonized_trace(spec, fs)
            b = fockoracle.poissonized_oracle(sp, alpha, fs, jumps=jm, tail_tol=cfg.tail_tol)
            d = abs(float(a) - b)
            float_max = max(float_max, d)
            add("poissonized", word, alpha, a, repr(b), repr(d))

    # mixed free cumulants across distinct particles
    for N in range(2, o.max_particles + 1):
        handles = [(i, name) for i in range(1, N + 1) for name in names]
        memo: dict = {}

        def mf(w, N=N):
            return fockoracle.free_product_word_expectation(
                sp, N, [(i, cfg.functions[n]) for i, n in w], jumps=jm)

        for k in range(2, o.freeness_max_word_length + 1):
            for w in itertools.product(handles, repeat=k):
                if len({i for i, _ in w}) < 2:
                    continue
                r = free_cumulant(mf, w, memo=memo)
                exact_max = max(exact_max, abs(r))
                add("freeness_particles", [f"{n}@{i}" for i, n in w], N, r, 0, abs(r))

    # mixed free cumulants of disjointly supported functions in the limit
    for f_name, g_name in itertools.combinations(names, 2):
        f, g = cfg.functions[f_name], cfg.functions[g_name]
        if any((f * g).values):
            continue
        memo = {}

        def mf(w):
            return fockoracle.fock_vacuum_expectation(sp, jm, [cfg.functions[n] for n in w])

        for k in range(2, o.freeness_max_word_length + 1):
            for w in itertools.product((f_name, g_name), repeat=k):
                if len(set(w)) < 2:
                    continue
                r = free_cumulant(mf, w, memo=memo)
                exact_max = max(exact_max, abs(r))
                add("freeness_limit", w, "", r, 0, abs(r))

    table.summary = {
        "max_exact_discrepancy": str(exact_max),
        "max_poissonized_discrepancy": repr(float_max),
        "tail_tol": repr(cfg.tail_tol),
        "ok": exact_max == 0 and float_max <= cfg.tail_tol,
    }
    return table


def run_partitions(cfg: ExperimentConfig) -> Table:
    n = cfg.n
    table = Table(PARTITION_COLUMNS)
    parts = enumerate_set_partitions(n)
    for p in parts:
        table.rows.append([str(n), str(p), str(len(p)), "true" if is_noncrossing(p) else "false"])
    table.summary = {
        "n": n,
        "set_partitions": len(parts),
        "noncrossing_partitions": len(enumerate_nc_partitions(n)),
        "bell": bell(n),
        "catalan": catalan(n),
    }
    return table
