"""Command-line front end: protocol runs, bounds, oracles, rate surfaces.

Every randomized command requires --seed and is bit-reproducible: the same
command line writes byte-identical outputs. Numbers print with 12 significant
digits. Exit codes: 0 success, 1 a verified check failed, 2 usage error.
Flag values override --config (key=value lines) which overrides defaults;
--threads (or USNC_THREADS) is accepted for symmetry with batch use but
results never depend on it.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import adversary, bounds, nqs, oracle, protocol
from .channel import UsncParams, check_c2, check_c3
from .entropy import cond_min_entropy, min_entropy
from .gf2 import (BitString, LinearCode, even_weight_code, hamming_7_4,
                  load_code, random_linear_code, repetition_code)

USAGE_ERROR = 2
CHECK_FAILED = 1


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return "%.12g" % x


def _pass_line(name: str, ok: bool) -> bool:
    print("%s: %s" % (name, "PASS" if ok else "FAIL"))
    return ok


def _read_config(path) -> dict:
    values = {}
    if path is None:
        return values
    with open(path) as fh:
        for ln in fh:
            ln = ln.split("#", 1)[0].strip()
            if not ln:
                continue
            if "=" not in ln:
                raise ValueError("bad config line: %r" % ln)
            key, val = (t.strip() for t in ln.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _resolve(args, config, name, type_fn, default=None, required=False):
    val = getattr(args, name, None)
    if val is None:
        raw = config.get(name)
        val = type_fn(raw) if raw is not None else default
    if val is None and required:
        raise UsageError("missing required option --%s" % name.replace("_", "-"))
    return val


def _code_from_spec(spec: str, d_claimed=None) -> LinearCode:
    if spec == "hamming74":
        return hamming_7_4()
    if spec.startswith("even:"):
        return even_weight_code(int(spec.split(":", 1)[1]))
    if spec.startswith("rep:"):
        return repetition_code(int(spec.split(":", 1)[1]))
    code = load_code(spec, d_claimed=d_claimed)
    if code.d_claimed is None and code.k <= 24:
        d = code.min_distance_exact()
        code = LinearCode(code.p_block, d_claimed=d, d_verified=True)
    return code


def _message_bits(hex_str: str, nbits: int) -> BitString:
    value = int(hex_str, 16)
    if value >> nbits:
        raise ValueError("message %r does not fit in %d bits" % (hex_str, nbits))
    return BitString.from_int(value, nbits)


# ---------------------------------------------------------------------------
# commit
# ---------------------------------------------------------------------------


def _cmd_commit_run(args, config) -> int:
    code = _code_from_spec(_resolve(args, config, "code", str, required=True))
    n = _resolve(args, config, "n", int, default=code.n)
    if n != code.n:
        raise UsageError("--n %d does not match the code length %d" % (n, code.n))
    hash_m = _resolve(args, config, "hash_m", int, required=True)
    p = _resolve(args, config, "p", float, required=True)
    eps = _resolve(args, config, "eps", float, required=True)
    seed = _resolve(args, config, "seed", int, required=True)
    cfg = protocol.CommitConfig(code=code, hash_m=hash_m, p=p, eps=eps)
    m = _message_bits(_resolve(args, config, "message", str, required=True),
                      hash_m)
    run = protocol.run_honest(m, cfg, np.random.default_rng([seed, 0]))
    text = protocol.transcript_to_json(run.transcript)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print("flag: %s" % run.flag)
    print("m_hat: %s" % run.m_hat.to01())
    return 0


def _cmd_commit_replay(args, config) -> int:
    code = _code_from_spec(_resolve(args, config, "code", str, required=True))
    hash_m = _resolve(args, config, "hash_m", int, required=True)
    p = _resolve(args, config, "p", float, required=True)
    eps = _resolve(args, config, "eps", float, required=True)
    cfg = protocol.CommitConfig(code=code, hash_m=hash_m, p=p, eps=eps)
    with open(args.transcript) as fh:
        t = protocol.transcript_from_json(fh.read())
    if t.opening is None:
        raise UsageError("transcript has no opening to replay")
    flag = protocol.bob_verify(t, t.opening.m, t.opening.x, cfg)
    print("flag: %s" % flag)
    print("m_hat: %s" % t.opening.m.to01())
    return 0


def _cmd_commit_complete(args, config) -> int:
    hash_m = _resolve(args, config, "hash_m", int, required=True)
    p = _resolve(args, config, "p", float, required=True)
    eps = _resolve(args, config, "eps", float, required=True)
    seed = _resolve(args, config, "seed", int, required=True)
    trials = _resolve(args, config, "trials", int, default=10 ** 4)
    code_spec = _resolve(args, config, "code", str)
    if code_spec:
        code = _code_from_spec(code_spec)
    else:
        n = _resolve(args, config, "n", int, required=True)
        k = _resolve(args, config, "k", int, default=16)
        target_d = _resolve(args, config, "target_d", int,
                            default=max(1, n // 4))
        code = random_linear_code(n, k, target_d,
                                  np.random.default_rng([seed, 9000]))
    cfg = protocol.CommitConfig(code=code, hash_m=hash_m, p=p, eps=eps)
    est = protocol.estimate_completeness(cfg, trials, seed)
    bound = bounds.completeness_bound(cfg.n, eps)
    print("reject_rate: %s" % _fmt(est.reject_rate))
    print("wilson_99: [%s, %s]" % (_fmt(est.wilson_low), _fmt(est.wilson_high)))
    print("worst_message_rate: %s" % _fmt(est.worst_message_rate))
    print("bound: %s" % _fmt(bound))
    ok = _pass_line("completeness tail bound", est.reject_rate <= bound
                    or est.wilson_low <= bound)
    return 0 if ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# attack
# ---------------------------------------------------------------------------


def _build_binding_strategy(desc: dict):
    code = _code_from_spec(desc["code"])
    cfg = protocol.CommitConfig(code=code, hash_m=int(desc.get("hash_m", 1)),
                                p=float(desc["p"]), eps=float(desc["eps"]))
    if desc.get("strategy", "midpoint") != "midpoint":
        raise ValueError("unknown binding strategy %r" % desc.get("strategy"))
    if "x0" in desc or "x1" in desc:
        x0 = BitString.from01(desc["x0"])
        x1 = BitString.from01(desc["x1"])
    else:
        w = int(desc["weight"])
        x0 = BitString.zeros(code.n)
        bits = np.zeros(code.n, dtype=np.uint8)
        bits[:w] = 1
        x1 = BitString(bits)
        if not code.contains(x1):
            raise ValueError("weight-%d prefix string is not a codeword; "
                             "give x0/x1 explicitly" % w)
    spread = float(desc.get("spread", 0.5))
    strategy = adversary.midpoint_attack(cfg, x0, x1, spread)
    return strategy, cfg


def _cmd_attack(args, config) -> int:
    desc = _read_config(args.strategy)
    kind = desc.get("kind", args.kind)
    if kind != args.kind:
        raise UsageError("strategy file is for %r, command expects %r"
                         % (kind, args.kind))
    mode = args.mode
    rng = None
    if mode == "mc":
        if args.seed is None:
            raise UsageError("--seed is required in Monte Carlo mode")
        rng = np.random.default_rng([args.seed, 77])
    if args.kind == "binding":
        strategy, cfg = _build_binding_strategy(desc)
        law = strategy.channel.law(strategy.channel.labels[0])
        l_a = min_entropy(law)
        params = UsncParams(n=cfg.n, p=cfg.p, eps_a=0.0, l_a=l_a,
                            eps_b=0.0, l_b=0.0)
        report = check_c2(strategy.channel, params)
        print("channel check: %s" % report)
        success = adversary.binding_success(
            strategy, cfg, mode=mode, trials=args.trials, rng=rng,
            for_bound_comparison=True)
        x0, _ = strategy.reveal0(strategy.atoms[0])
        x1, _ = strategy.reveal1(strategy.atoms[0])
        sigma = (x0 ^ x1).weight() / (2.0 * cfg.n)
        bound = bounds.binding_bound(cfg.n, cfg.eps, sigma, cfg.p, l_a, 0.0)
        print("success: %s" % _fmt(success))
        print("bound: %s" % _fmt(bound))
        slack = 0.0 if mode == "exact" else 3.0 * np.sqrt(
            max(success, bound) / max(args.trials, 1))
        ok = _pass_line("double-opening success bound", success <= bound + slack)
        return 0 if ok else CHECK_FAILED
    # hiding
    code = _code_from_spec(desc["code"])
    cfg = protocol.CommitConfig(code=code, hash_m=int(desc.get("hash_m", 1)),
                                p=float(desc["p"]), eps=float(desc["eps"]))
    if desc.get("strategy", "less_noisy_bob") != "less_noisy_bob":
        raise ValueError("unknown hiding strategy %r" % desc.get("strategy"))
    strategy = adversary.less_noisy_bob(float(desc["p_b"]), cfg.n)
    joint = strategy.view_channel.joint_with_uniform_input()
    l_b = cond_min_entropy(joint)
    params = UsncParams(n=cfg.n, p=cfg.p, eps_a=0.0, l_a=0.0,
                        eps_b=0.0, l_b=l_b)
    report = check_c3(strategy.view_channel, params)
    print("channel check: %s" % report)
    m0 = _message_bits(desc.get("m0", "0"), cfg.hash_m)
    m1 = _message_bits(desc.get("m1", "1"), cfg.hash_m)
    adv = adversary.hiding_advantage(strategy, cfg, m0, m1, mode=mode,
                                     trials=args.trials, rng=rng,
                                     for_bound_comparison=True)
    k = code.k
    bound = bounds.hiding_bound(cfg.n, cfg.hash_m, k, l_b, 0.0)
    print("advantage: %s" % _fmt(adv))
    print("bound: %s" % _fmt(bound))
    slack = 0.0 if mode == "exact" else 3.0 / np.sqrt(max(args.trials, 1))
    ok = _pass_line("view-distance bound", adv <= bound + slack)
    return 0 if ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# bounds / rate
# ---------------------------------------------------------------------------


def _cmd_bounds_eval(args, config) -> int:
    which = args.which
    get = lambda name, required=True: _resolve(args, config, name, float,
                                               required=required)
    if which == "dc":
        val = bounds.completeness_bound(int(get("n")), get("eps"))
    elif which == "dh":
        val = bounds.hiding_bound(int(get("n")), get("log_m"), get("log_c"),
                                  get("l_b"), get("eps_b"))
    elif which == "db":
        val = bounds.binding_bound(int(get("n")), get("eps"), get("sigma"),
                                   get("p"), get("l_a"), get("eps_a"))
    else:  # the typical-window intersection ceiling
        val = bounds.intersection_bound(int(get("n")), get("p"), get("eps"),
                                        get("sigma"))
    print(_fmt(val))
    return 0


def _cmd_rate_surface(args, config) -> int:
    p = _resolve(args, config, "p", float, required=True)
    steps = _resolve(args, config, "steps", int, default=50)
    points = bounds.rate_surface(p, steps)
    lines = ["xi_a,xi_b,rate"]
    lines += ["%s,%s,%s" % (_fmt(pt.xi_a), _fmt(pt.xi_b), _fmt(pt.r))
              for pt in points]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print("wrote %d points to %s" % (len(points), args.out))
    else:
        sys.stdout.write(text)
    return 0


def _cmd_rate_point(args, config) -> int:
    p = _resolve(args, config, "p", float, required=True)
    xia = _resolve(args, config, "xia", float, required=True)
    xib = _resolve(args, config, "xib", float, required=True)
    # accept anchor values rounded to a few decimals at the domain edges
    hp = bounds.binary_entropy(p)
    xia = _clamp_near(xia, 2.0 * p, hp)
    xib = _clamp_near(xib, 0.0, hp)
    print(_fmt(bounds.achievable_rate(p, xia, xib)))
    return 0


def _clamp_near(value: float, lo: float, hi: float, tol: float = 1e-3) -> float:
    if lo - tol <= value <= lo:
        return lo
    if hi <= value <= hi + tol:
        return hi
    return value


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def _cmd_oracle_intersection(args, config) -> int:
    n = _resolve(args, config, "n", int, required=True)
    p = _resolve(args, config, "p", float, required=True)
    eps = _resolve(args, config, "eps", float, required=True)
    report = oracle.verify_intersection_bound(n, p, eps)
    for row in report.rows:
        print("w=%2d exact=%8d bound=%s" % (row.weight, row.exact,
                                            _fmt(row.bound)))
    print("max_ratio: %s" % _fmt(report.max_ratio))
    ok = _pass_line("typical-set intersection bound", report.passed)
    return 0 if ok else CHECK_FAILED


def _cmd_oracle_lhl(args, config) -> int:
    code = _code_from_spec(_resolve(args, config, "code", str,
                                    default="hamming74"))
    hash_m = _resolve(args, config, "hash_m", int, default=1)
    p_b = _resolve(args, config, "p_b", float, default=0.25)
    n_seeds = _resolve(args, config, "seeds", int, default=0)
    strategy = adversary.less_noisy_bob(p_b, code.n)
    if n_seeds:
        seed = _resolve(args, config, "seed", int, required=True)
        res = oracle.lhl_check(code, hash_m, strategy.view_channel,
                               seeds=n_seeds,
                               rng=np.random.default_rng([seed, 5]))
    else:
        res = oracle.lhl_check(code, hash_m, strategy.view_channel)
    print("lhs: %s" % _fmt(res.lhs))
    print("rhs: %s" % _fmt(res.rhs))
    print("h_min: %s" % _fmt(res.h_min))
    ok = _pass_line("leftover-hash inequality", res.passed)
    return 0 if ok else CHECK_FAILED


def _cmd_oracle_clipped(args, config) -> int:
    n = _resolve(args, config, "n", int, required=True)
    p = _resolve(args, config, "p", float, required=True)
    eps = _resolve(args, config, "eps", float, required=True)
    res = oracle.clipped_bsc_construction(n, p, eps,
                                          with_conditional=n <= 14)
    print("gtd_actual: %s" % _fmt(res.gtd_actual))
    print("tail: %s" % _fmt(res.tail))
    print("min_entropy_per_input: %s" % _fmt(res.min_entropy_per_input))
    print("entropy_floor: %s" % _fmt(res.entropy_floor))
    if res.cond_min_entropy is not None:
        print("cond_min_entropy: %s" % _fmt(res.cond_min_entropy))
    ok = (abs(res.gtd_actual - res.tail) <= 1e-12
          and res.min_entropy_per_input >= res.entropy_floor - 1e-9
          and (res.cond_min_entropy is None
               or res.cond_min_entropy >= res.entropy_floor - 1e-9))
    ok = _pass_line("clipped-channel construction", ok)
    return 0 if ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# nqs
# ---------------------------------------------------------------------------


def _cmd_nqs_simulate(args, config) -> int:
    n = _resolve(args, config, "n", int, required=True)
    seed = _resolve(args, config, "seed", int, required=True)
    rng = np.random.default_rng([seed, 1])
    x = BitString.random(n, rng)
    run = nqs.run_conjugate_channel(x, rng)
    lines = ["round,x,theta,theta_prime,k,z"]
    zbits = run.z.bits
    for i in range(n):
        lines.append("%d,%d,%d,%d,%d,%d" % (i, x.bits[i], run.theta[i],
                                            run.theta_prime[i], run.k[i],
                                            zbits[i]))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print("wrote %d rounds to %s" % (n, args.out))
    else:
        sys.stdout.write(text)
    flips = int(np.count_nonzero(zbits != x.bits))
    print("flip_rate: %s" % _fmt(flips / n))
    return 0


def _cmd_nqs_params(args, config) -> int:
    n = _resolve(args, config, "n", int, required=True)
    lam_a = _resolve(args, config, "lambda_a", float, required=True)
    lam_b = _resolve(args, config, "lambda_b", float, required=True)
    d = _resolve(args, config, "storage_dim", int, required=True)
    params = nqs.NqsParams(
        n=n, lambda_a=lam_a, lambda_b=lam_b,
        p_succ=lambda bits: nqs.bounded_storage_success(bits, d),
        p_succ_log2=lambda bits: nqs.bounded_storage_success_log2(bits, d),
        d=d)
    theta = nqs.nqs_channel_params(params)
    print("p: %s" % _fmt(theta.p))
    print("eps_a: %s" % _fmt(theta.eps_a))
    print("l_a: %s" % _fmt(theta.l_a))
    print("eps_b: %s" % _fmt(theta.eps_b))
    print("l_b: %s" % _fmt(theta.l_b))
    return 0


def _cmd_nqs_povm(args, config) -> int:
    report = nqs.povm_verify()
    print("completeness_error: %s" % _fmt(report.completeness_error))
    print("min_eigenvalue: %s" % _fmt(report.min_eigenvalue))
    print("max_eigenvalue_err: %s" % _fmt(report.max_eigenvalue_err))
    ok = _pass_line("measurement operator pair", report.passed)
    return 0 if ok else CHECK_FAILED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _env_threads():
    try:
        return int(os.environ.get("USNC_THREADS", "0")) or None
    except ValueError:
        return None


def _add_common(sp):
    sp.add_argument("--config", default=None)
    sp.add_argument("--threads", type=int, default=_env_threads())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="usnc",
        description="String commitment over unstructured noisy channels")
    sub = ap.add_subparsers(dest="command", required=True)

    commit = sub.add_parser("commit").add_subparsers(dest="sub", required=True)
    run = commit.add_parser("run")
    for flag in ("--code", "--message"):
        run.add_argument(flag)
    for flag in ("--n", "--hash-m", "--seed"):
        run.add_argument(flag, type=int)
    for flag in ("--p", "--eps"):
        run.add_argument(flag, type=float)
    run.add_argument("--out", default=None)
    _add_common(run)
    run.set_defaults(func=_cmd_commit_run)

    replay = commit.add_parser("replay")
    replay.add_argument("--transcript", required=True)
    replay.add_argument("--code")
    replay.add_argument("--hash-m", type=int)
    for flag in ("--p", "--eps"):
        replay.add_argument(flag, type=float)
    _add_common(replay)
    replay.set_defaults(func=_cmd_commit_replay)

    comp = commit.add_parser("complete")
    comp.add_argument("--code")
    for flag in ("--n", "--k", "--target-d", "--hash-m", "--trials", "--seed"):
        comp.add_argument(flag, type=int)
    for flag in ("--p", "--eps"):
        comp.add_argument(flag, type=float)
    _add_common(comp)
    comp.set_defaults(func=_cmd_commit_complete)

    attack = sub.add_parser("attack")
    attack.add_argument("kind", choices=["binding", "hiding"])
    attack.add_argument("--strategy", required=True)
    attack.add_argument("--mode", choices=["exact", "mc"], default="exact")
    attack.add_argument("--trials", type=int, default=10 ** 5)
    attack.add_argument("--seed", type=int)
    _add_common(attack)
    attack.set_defaults(func=_cmd_attack)

    bnd = sub.add_parser("bounds").add_subparsers(dest="sub", required=True)
    ev = bnd.add_parser("eval")
    ev.add_argument("--which", choices=["dc", "dh", "db", "intersection"],
                    required=True)
    ev.add_argument("--n", type=int)
    for flag in ("--eps", "--p", "--sigma", "--l-a", "--eps-a", "--l-b",
                 "--eps-b", "--log-m", "--log-c"):
        ev.add_argument(flag, type=float)
    _add_common(ev)
    ev.set_defaults(func=_cmd_bounds_eval)

    rate = sub.add_parser("rate").add_subparsers(dest="sub", required=True)
    surf = rate.add_parser("surface")
    surf.add_argument("--p", type=float)
    surf.add_argument("--steps", type=int)
    surf.add_argument("--out", default=None)
    _add_common(surf)
    surf.set_defaults(func=_cmd_rate_surface)
    point = rate.add_parser("point")
    point.add_argument("--p", type=float)
    point.add_argument("--xia", type=float)
    point.add_argument("--xib", type=float)
    _add_common(point)
    point.set_defaults(func=_cmd_rate_point)

    orc = sub.add_parser("oracle").add_subparsers(dest="sub", required=True)
    lem = orc.add_parser("intersection")
    lem.add_argument("--n", type=int)
    lem.add_argument("--p", type=float)
    lem.add_argument("--eps", type=float)
    _add_common(lem)
    lem.set_defaults(func=_cmd_oracle_intersection)
    lhl = orc.add_parser("lhl")
    lhl.add_argument("--code")
    lhl.add_argument("--hash-m", type=int)
    lhl.add_argument("--p-b", type=float)
    lhl.add_argument("--seeds", type=int)
    lhl.add_argument("--seed", type=int)
    _add_common(lhl)
    lhl.set_defaults(func=_cmd_oracle_lhl)
    apb = orc.add_parser("clipped")
    apb.add_argument("--n", type=int)
    apb.add_argument("--p", type=float)
    apb.add_argument("--eps", type=float)
    _add_common(apb)
    apb.set_defaults(func=_cmd_oracle_clipped)

    qn = sub.add_parser("nqs").add_subparsers(dest="sub", required=True)
    sim = qn.add_parser("simulate")
    sim.add_argument("--n", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--out", default=None)
    _add_common(sim)
    sim.set_defaults(func=_cmd_nqs_simulate)
    par = qn.add_parser("params")
    par.add_argument("--n", type=int)
    par.add_argument("--lambda-a", type=float)
    par.add_argument("--lambda-b", type=float)
    par.add_argument("--storage-dim", type=int)
    _add_common(par)
    par.set_defaults(func=_cmd_nqs_params)
    pov = qn.add_parser("povm-verify")
    _add_common(pov)
    pov.set_defaults(func=_cmd_nqs_povm)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _read_config(getattr(args, "config", None))
        return args.func(args, config)
    except (UsageError, ValueError, OSError, RuntimeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
