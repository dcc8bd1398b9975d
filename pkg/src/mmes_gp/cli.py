"""Command-line entry point: ``mmes-gp {search,evaluate,oracle,bench}``.

Every subcommand writes one JSON document to stdout holding the effective
configuration (defaults resolved, seed included) and the result. Failures
print a JSON error object to stderr and exit with 2 (configuration or
usage) or 3 (numerical integrity).
"""
from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .bench import run_measure_benchmark, to_csv
from .entanglement import entanglement_potential, upper_bound
from .errors import ConfigurationError, IntegrityError, MmesError, NumericalIntegrityError, UsageError
from .evolution import GaConfig
from .genome import Topology, default_gate_set, parse_circuit
from .oracle import exhaustive_min_search
from .search import count_cnots, extract_connection_graph, find_minimal_circuit, sorted_edges
from .simulator import run_circuit

EXIT_CONFIG = 2
EXIT_NUMERIC = 3

DEFAULTS = {
    "search": {
        "topology": "complete",
        "edges": None,
        "gate_set": None,
        "population": 200,
        "tournament": 4,
        "keep_prob": 0.95,
        "generations": 2000,
        "stall": 200,
        "min_length": 1,
        "max_length": None,
        "restarts": 5,
        "plateau": 3,
        "target": None,
        "prefix_restriction": True,
        "stats": None,
    },
    "evaluate": {},
    "oracle": {
        "topology": "complete",
        "edges": None,
        "gate_set": None,
        "cap": 3,
        "target": None,
        "minimize_cnots": True,
    },
    "bench": {
        "min_qubits": 2,
        "max_qubits": 8,
        "samples": 1000,
        "csv": None,
    },
}


def _common(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--config", type=Path, help="JSON file of settings; flags override it")
    p.add_argument("--qubits", type=int)
    p.add_argument("--output", type=Path, help="also write the JSON document here")
    p.add_argument("--threads", type=int)
    if seed:
        p.add_argument("--seed", type=int)


def _topology_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--topology", choices=["spin-chain", "spin_chain", "complete", "custom"])
    p.add_argument("--edges", help='custom edge list, e.g. "0-1,1-2,2>3"')
    p.add_argument("--gate-set", dest="gate_set", choices=["H+CNOT", "H+CNOT+T"])
    p.add_argument("--target", type=float, help="potential to reach (default: upper bound)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmes-gp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="iterative-deepening GP search for a minimal circuit")
    _common(s)
    _topology_args(s)
    s.add_argument("--population", type=int)
    s.add_argument("--tournament", type=int)
    s.add_argument("--keep-prob", dest="keep_prob", type=float,
                   help="per-gene probability of KEEPING a gene under mutation")
    s.add_argument("--generations", type=int)
    s.add_argument("--stall", type=int, help="stop a run after this many generations without improvement (0: never)")
    s.add_argument("--min-length", dest="min_length", type=int)
    s.add_argument("--max-length", dest="max_length", type=int)
    s.add_argument("--restarts", type=int)
    s.add_argument("--plateau", type=int, help="stop deepening after this many lengths without improvement (0: never)")
    s.add_argument("--no-prefix-restriction", dest="prefix_restriction", action="store_const", const=False)
    s.add_argument("--stats", help="file for line-delimited generation stats ('-' for stderr)")

    e = sub.add_parser("evaluate", help="score the state prepared by a circuit file")
    _common(e, seed=False)
    e.add_argument("--circuit", type=Path, required=True)

    o = sub.add_parser("oracle", help="exhaustive minimal-length search")
    _common(o, seed=False)
    _topology_args(o)
    o.add_argument("--cap", type=int)
    o.add_argument("--no-cnot-min", dest="minimize_cnots", action="store_const", const=False)

    b = sub.add_parser("bench", help="time entropy vs negativity on random states")
    _common(b)
    b.add_argument("--min-qubits", dest="min_qubits", type=int)
    b.add_argument("--max-qubits", dest="max_qubits", type=int)
    b.add_argument("--samples", type=int)
    b.add_argument("--csv", help="write records as CSV here")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < flags into the effective configuration."""
    cfg = {"threads": 1, **DEFAULTS[args.command]}
    if args.config is not None:
        try:
            loaded = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigurationError("config file must hold a JSON object")
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    skip = {"command", "config", "output", "verbose", "circuit"}
    for key, value in vars(args).items():
        if key not in skip and value is not None:
            cfg[key] = value
    if args.command in ("search", "bench") and cfg.get("seed") is None:
        cfg["seed"] = secrets.randbits(63)
    if args.command != "bench" and cfg.get("qubits") is None:
        if args.command != "evaluate":
            raise ConfigurationError("--qubits is required")
    if cfg.get("threads", 1) < 1:
        raise ConfigurationError("--threads must be >= 1")
    return cfg


def _topology(cfg: dict) -> Topology:
    return Topology.named(cfg["topology"], cfg["qubits"], cfg.get("edges"))


def _stats_sink(path: Optional[str]):
    if path is None:
        return None
    if path == "-":
        return sys.stderr
    return open(path, "w")


def cmd_search(cfg: dict) -> dict:
    n = cfg["qubits"]
    topo = _topology(cfg)
    cfg["gate_set"] = cfg["gate_set"] or default_gate_set(n)
    cfg["max_length"] = cfg["max_length"] or 8 * n
    ga = GaConfig(
        population_size=cfg["population"],
        tournament_size=cfg["tournament"],
        keep_probability=cfg["keep_prob"],
        generations=cfg["generations"],
        seed=cfg["seed"],
        stall_generations=cfg["stall"] or None,
    )
    sink = _stats_sink(cfg["stats"])
    try:
        result = find_minimal_circuit(
            n, topo, ga,
            max_length=cfg["max_length"],
            restarts_per_length=cfg["restarts"],
            gate_set=cfg["gate_set"],
            target=cfg["target"],
            min_length=cfg["min_length"],
            restrict_prefix=cfg["prefix_restriction"],
            plateau_lengths=cfg["plateau"] or None,
            threads=cfg["threads"],
            stats_sink=sink,
        )
    finally:
        if sink not in (None, sys.stderr):
            sink.close()
    return result.to_dict()


def cmd_evaluate(cfg: dict, circuit_path: Path) -> dict:
    try:
        gates = parse_circuit(circuit_path.read_text())
    except OSError as exc:
        raise ConfigurationError(f"cannot read circuit {circuit_path}: {exc}") from None
    n = cfg.get("qubits")
    if n is None:
        n = max((q for g in gates for q in g.qubits), default=0) + 1
        cfg["qubits"] = n
    state = run_circuit(gates, n)
    report = entanglement_potential(state)
    out = report.to_dict()
    out.update(
        n_qubits=n,
        circuit=[str(g) for g in gates],
        total_gates=len(gates),
        cnot_count=count_cnots(gates),
        upper_bound=upper_bound(n),
        connection_graph=sorted_edges(extract_connection_graph(gates)),
        nonzero_amplitudes=int(np.sum(np.abs(state.amplitudes) > 1e-12)),
    )
    return out


def cmd_oracle(cfg: dict) -> dict:
    n = cfg["qubits"]
    cfg["gate_set"] = cfg["gate_set"] or default_gate_set(n)
    report = exhaustive_min_search(
        n, _topology(cfg), cfg["gate_set"], cfg["cap"], target=cfg["target"],
        minimize_cnots=cfg["minimize_cnots"], threads=cfg["threads"],
    )
    return report.to_dict()


def cmd_bench(cfg: dict) -> dict:
    rng = np.random.default_rng(cfg["seed"])
    records = run_measure_benchmark(range(cfg["min_qubits"], cfg["max_qubits"] + 1), cfg["samples"], rng)
    if cfg["csv"]:
        Path(cfg["csv"]).write_text(to_csv(records))
    return {
        "records": [
            {"n": r.n_qubits, "measure": r.measure, "samples": r.sample_count,
             "mean_seconds": r.mean_time, "std_seconds": r.std_dev, "median_seconds": r.median_time}
            for r in records
        ]
    }


def _fail(code: int, exc: Exception) -> int:
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(err), file=sys.stderr)
    return code


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        cfg = resolve_config(args)
        if args.command == "search":
            result = cmd_search(cfg)
        elif args.command == "evaluate":
            result = cmd_evaluate(cfg, args.circuit)
        elif args.command == "oracle":
            result = cmd_oracle(cfg)
        else:
            result = cmd_bench(cfg)
    except NumericalIntegrityError as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (ConfigurationError, UsageError, IntegrityError) as exc:
        return _fail(EXIT_CONFIG, exc)
    except MmesError as exc:
        return _fail(EXIT_CONFIG, exc)

    doc = json.dumps({"command": args.command, "config": cfg, "result": result}, indent=2)
    if args.output is not None:
        args.output.write_text(doc + "\n")
    print(doc)
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
