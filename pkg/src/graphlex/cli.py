"""Command-line interface.

Subcommands: graph build, expand {lgde,threshold,knn,ikea,textrank}, eval,
sweep, stats {lr,mwu}. Flags win over the optional --config JSON (a file
whose keys mirror the long flag names). Reports are deterministic: repeated
runs produce byte-identical outputs, and a timestamp field appears only
under --timestamps.
"""

from __future__ import annotations

import datetime
import functools
import json
import math
import os
import sys

import click
from click.core import ParameterSource

from . import __version__
from .cknn import build_cknn, connected_components, read_edgelist, write_edgelist
from .corpus import load_corpus, load_stopwords, read_token_file
from .errors import ConfigError, EvaluationError, GraphlexError
from .evaluation import (
    evaluate,
    likelihood_ratios_for_tokens,
    mann_whitney_u,
    median_lr,
    sweep as run_sweep,
)
from .expanders import (
    Dictionary,
    expand_ikea,
    expand_knn,
    expand_lgde,
    expand_textrank,
    expand_threshold,
    read_dictionary,
    write_dictionary,
)
from .similarity import pairwise_matrices
from .vector_store import (
    filter_vocabulary,
    load_embeddings,
    resolve_seeds,
    resolve_tokens,
    subset_space,
)


def _catch(fn):
    """Surface GraphlexError as a one-line diagnostic and exit 1."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GraphlexError as exc:
            click.echo(f"{exc.category}: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _apply_config(ctx, params):
    """Overlay --config JSON under explicitly passed flags (flags win)."""
    path = params.get("config")
    if not path:
        return params
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    aliases = {}
    by_name = {}
    for p in ctx.command.params:
        by_name[p.name] = p
        aliases[p.name] = p.name
        for opt in getattr(p, "opts", ()):
            if opt.startswith("--"):
                aliases[opt[2:].replace("-", "_")] = p.name
    for key, value in cfg.items():
        name = aliases.get(key.replace("-", "_"))
        if name == "config":
            continue
        if name is None or name not in params:
            raise ConfigError(f"config key {key!r} does not match any flag")
        if ctx.get_parameter_source(name) == ParameterSource.COMMANDLINE:
            continue
        if value is not None:
            try:
                value = by_name[name].type.convert(value, by_name[name], ctx)
            except click.UsageError as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc
        params[name] = value
    return params


def _require(params, *names):
    """Post-merge presence check for flags that --config may supply."""
    missing = [n for n in names if params.get(n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ConfigError(f"missing required option(s): {flags}")


def _jsonable(x):
    """Make a payload strict-JSON safe: inf -> 'inf', numpy scalars -> python."""
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _jsonable(x.item())
    return x


def _run_config(ctx, params, timestamps):
    # threads is an execution detail that cannot change any output, so it is
    # not part of the run record; everything else that shaped the result is.
    cfg = {
        "command": ctx.command_path,
        "tool_version": __version__,
        "options": _jsonable({k: v for k, v in sorted(params.items())
                              if k != "threads"}),
    }
    if timestamps:
        cfg["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return cfg


def _write_report(path, payload):
    text = json.dumps(_jsonable(payload), indent=2, ensure_ascii=False,
                      allow_nan=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _emit_report(path, payload):
    if path:
        _write_report(path, payload)
    else:
        click.echo(json.dumps(_jsonable(payload), indent=2, ensure_ascii=False,
                              allow_nan=False))


def _parse_grid(spec, cast, name):
    """Parse 'a,b,c' or 'start:stop[:step]' (inclusive) into a value list."""
    if spec is None:
        raise ConfigError(f"missing required grid --{name}")
    spec = str(spec).strip()
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) == 2:
                start, stop = cast(parts[0]), cast(parts[1])
                step = cast(1)
            elif len(parts) == 3:
                start, stop = cast(parts[0]), cast(parts[1])
                step = cast(parts[2])
            else:
                raise ValueError("expected start:stop[:step]")
            if step <= 0 or stop < start:
                raise ValueError("need step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            if cast is int:
                return [start + i * step for i in range(count)]
            return [round(start + i * step, 10) for i in range(count)]
        return [cast(v) for v in spec.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad grid --{name} {spec!r}: {exc}") from exc


def _default_report_path(out):
    root, ext = os.path.splitext(out)
    candidate = root + ".json"
    if candidate == out:
        candidate = out + ".report.json"
    return candidate


def _load_corpus_opts(path, stopwords, no_lowercase):
    stops = load_stopwords(stopwords) if stopwords else None
    return load_corpus(path, lowercase=not no_lowercase, stopwords=stops)


def _corpus_options(fn):
    fn = click.option("--stopwords", type=click.Path(), default=None,
                      help="Stopword file (one token per line).")(fn)
    fn = click.option("--no-lowercase", is_flag=True, default=False,
                      help="Keep original casing when tokenizing.")(fn)
    return fn


def _common_options(fn):
    fn = click.option("--config", type=click.Path(), default=None,
                      help="JSON file mirroring flags; explicit flags win.")(fn)
    fn = click.option("--timestamps", is_flag=True, default=False,
                      help="Include a timestamp field in reports.")(fn)
    return fn


def _space_options(fn):
    fn = click.option("--min-norm", type=float, default=1e-12, show_default=True,
                      help="Reject vectors with norm below this.")(fn)
    fn = click.option("--allow-duplicates", is_flag=True, default=False,
                      help="Keep bitwise-duplicate vectors instead of erroring.")(fn)
    return fn


def _resolve_seed_file(seeds_path, token_index, what):
    tokens = read_token_file(seeds_path)
    sd = resolve_tokens(token_index, tokens)
    if sd.unresolved:
        click.echo(
            f"warning: {len(sd.unresolved)} seed(s) not in {what}: "
            + ", ".join(sd.unresolved[:10]),
            err=True,
        )
    return sd


def _resolve_seeds_in_space(seeds_path, space):
    sd = resolve_seeds(space, read_token_file(seeds_path))
    if sd.unresolved:
        click.echo(
            f"warning: {len(sd.unresolved)} seed(s) not in vocabulary: "
            + ", ".join(sd.unresolved[:10]),
            err=True,
        )
    return sd


@click.group()
@click.version_option(__version__, prog_name="graphlex")
def main():
    """Expand seed keyword dictionaries over word-embedding graphs."""


@main.group()
def graph():
    """Semantic graph construction."""


@graph.command("build")
@click.option("--embeddings", type=click.Path(), default=None,
              help="Embedding file (word2vec header or headerless).")
@click.option("--k", type=int, default=None, help="Neighbor count for CkNN.")
@click.option("--delta", type=float, default=1.0, show_default=True,
              help="CkNN density scaling.")
@click.option("--out", type=click.Path(), default=None, help="Edge-list TSV.")
@click.option("--corpus", type=click.Path(), default=None,
              help="Restrict the vocabulary by document frequency first.")
@click.option("--min-doc-count", type=int, default=1, show_default=True)
@click.option("--max-doc-fraction", type=float, default=1.0, show_default=True)
@_space_options
@_corpus_options
@_common_options
@click.pass_context
@_catch
def graph_build(ctx, **params):
    """Build the CkNN graph from an embedding file."""
    params = _apply_config(ctx, params)
    _require(params, "embeddings", "k", "out")
    space = load_embeddings(params["embeddings"], min_norm=params["min_norm"],
                            allow_duplicates=params["allow_duplicates"])
    if params["corpus"]:
        corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                                   params["no_lowercase"])
        keep = filter_vocabulary(corpus, params["min_doc_count"],
                                 params["max_doc_fraction"])
        space = subset_space(space, keep)
    matrices = pairwise_matrices(space)
    g = build_cknn(matrices, params["k"], params["delta"])
    write_edgelist(g, params["out"])
    click.echo(
        f"N={g.n_nodes} edges={g.n_edges} isolated={len(g.isolated_nodes())} "
        f"components={len(connected_components(g))}"
    )


@main.group()
def expand():
    """Dictionary expansion methods."""


def _finish_expand(ctx, params, dictionary, unresolved, node_tokens=None):
    write_dictionary(dictionary, params["out"])
    report_path = params.get("report") or _default_report_path(params["out"])
    payload = {
        "run_config": _run_config(ctx, params, params["timestamps"]),
        "method": dictionary.method,
        "params": dictionary.params,
        "seeds": list(dictionary.seeds),
        "unresolved_seeds": list(unresolved),
        "dictionary_size": len(dictionary),
        "discovered_size": len(dictionary.discovered),
        "discovered": list(dictionary.discovered),
        "provenance": dictionary.provenance,
    }
    if dictionary.communities and node_tokens is not None:
        payload["communities"] = [c.to_report(node_tokens)
                                  for c in dictionary.communities]
    _write_report(report_path, payload)
    click.echo(
        f"{dictionary.method}: {len(dictionary.discovered)} discovered "
        f"({len(dictionary)} total) -> {params['out']}"
    )


def _expand_common(fn):
    fn = click.option("--seeds", type=click.Path(), default=None,
                      help="Seed keyword file (one token per line).")(fn)
    fn = click.option("--out", type=click.Path(), default=None,
                      help="Dictionary file to write.")(fn)
    fn = click.option("--report", type=click.Path(), default=None,
                      help="JSON report path (default: derived from --out).")(fn)
    fn = _common_options(fn)
    return fn


@expand.command("lgde")
@click.option("--graph", "graph_path", type=click.Path(), default=None,
              help="Edge-list TSV from `graph build`.")
@click.option("--t", type=int, default=None, help="Markov time.")
@click.option("--max-size", type=int, default=100, show_default=True,
              help="Community size cap.")
@click.option("--threads", type=int, default=None,
              help="Worker threads for per-seed searches (default: cores).")
@_expand_common
@click.pass_context
@_catch
def expand_lgde_cmd(ctx, **params):
    """Severability communities around each seed on the CkNN graph."""
    params = _apply_config(ctx, params)
    _require(params, "graph_path", "t", "seeds", "out")
    g = read_edgelist(params["graph_path"])
    index = {tok: i for i, tok in enumerate(g.node_tokens)}
    sd = _resolve_seed_file(params["seeds"], index, "graph")
    threads = params["threads"] or os.cpu_count() or 1
    dictionary = expand_lgde(g, sd, params["t"], max_size=params["max_size"],
                             threads=threads)
    _finish_expand(ctx, params, dictionary, sd.unresolved,
                   node_tokens=g.node_tokens)


@expand.command("threshold")
@click.option("--embeddings", type=click.Path(), default=None)
@click.option("--epsilon", type=float, default=None,
              help="Cosine threshold in [-1, 1].")
@_space_options
@_expand_common
@click.pass_context
@_catch
def expand_threshold_cmd(ctx, **params):
    """Direct cosine neighborhoods of the seeds."""
    params = _apply_config(ctx, params)
    _require(params, "embeddings", "epsilon", "seeds", "out")
    space = load_embeddings(params["embeddings"], min_norm=params["min_norm"],
                            allow_duplicates=params["allow_duplicates"])
    sd = _resolve_seeds_in_space(params["seeds"], space)
    dictionary = expand_threshold(space, sd, params["epsilon"])
    _finish_expand(ctx, params, dictionary, sd.unresolved)


@expand.command("knn")
@click.option("--embeddings", type=click.Path(), default=None)
@click.option("--k", type=int, default=None, help="Neighbors per seed.")
@_space_options
@_expand_common
@click.pass_context
@_catch
def expand_knn_cmd(ctx, **params):
    """k most cosine-similar words of each seed."""
    params = _apply_config(ctx, params)
    _require(params, "embeddings", "k", "seeds", "out")
    space = load_embeddings(params["embeddings"], min_norm=params["min_norm"],
                            allow_duplicates=params["allow_duplicates"])
    sd = _resolve_seeds_in_space(params["seeds"], space)
    dictionary = expand_knn(space, sd, params["k"])
    _finish_expand(ctx, params, dictionary, sd.unresolved)


@expand.command("ikea")
@click.option("--embeddings", type=click.Path(), default=None)
@click.option("--epsilon", type=float, default=None,
              help="Mean-similarity threshold in [-1, 1].")
@click.option("--max-iterations", type=int, default=100, show_default=True)
@_space_options
@_expand_common
@click.pass_context
@_catch
def expand_ikea_cmd(ctx, **params):
    """Iterative mean-similarity thresholding until a fixpoint."""
    params = _apply_config(ctx, params)
    _require(params, "embeddings", "epsilon", "seeds", "out")
    space = load_embeddings(params["embeddings"], min_norm=params["min_norm"],
                            allow_duplicates=params["allow_duplicates"])
    sd = _resolve_seeds_in_space(params["seeds"], space)
    dictionary = expand_ikea(space, sd, params["epsilon"],
                             max_iterations=params["max_iterations"])
    _finish_expand(ctx, params, dictionary, sd.unresolved)


@expand.command("textrank")
@click.option("--corpus", type=click.Path(), default=None,
              help="Line-JSON corpus; only documents with a seed are used.")
@click.option("--window", type=int, default=2, show_default=True,
              help="Co-occurrence window size.")
@click.option("--top-k", type=int, default=None,
              help="Number of ranked words to return.")
@click.option("--damping", type=float, default=0.85, show_default=True)
@_corpus_options
@_expand_common
@click.pass_context
@_catch
def expand_textrank_cmd(ctx, **params):
    """Weighted PageRank over seed-document co-occurrences."""
    params = _apply_config(ctx, params)
    _require(params, "corpus", "top_k", "seeds", "out")
    corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                               params["no_lowercase"])
    vocab = sorted({t for d in corpus.documents for t in d.token_set})
    index = {tok: i for i, tok in enumerate(vocab)}
    sd = _resolve_seed_file(params["seeds"], index, "corpus")
    dictionary = expand_textrank(corpus, sd, window=params["window"],
                                 top_k=params["top_k"],
                                 damping=params["damping"])
    _finish_expand(ctx, params, dictionary, sd.unresolved)


def _lr_section(tokens, corpus, haldane):
    entries = likelihood_ratios_for_tokens(tokens, corpus, haldane=haldane)
    payload_entries = [
        {
            "token": e.token,
            "lr": e.lr,
            "p_true": e.p_true,
            "p_false": e.p_false,
            "true_count": e.true_count,
            "false_count": e.false_count,
        }
        for e in entries
    ]
    section = {
        "entries": payload_entries,
        "n_defined": len(entries),
        "omitted_undefined": len(tokens) - len(entries),
    }
    if entries:
        section["median"] = median_lr([e.lr for e in entries])
    return section


def _write_lr_tsv(path, section):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("token\tlr\tp_true\tp_false\ttrue_count\tfalse_count\n")
        for e in section["entries"]:
            fh.write(
                f"{e['token']}\t{e['lr']}\t{e['p_true']:.17g}\t"
                f"{e['p_false']:.17g}\t{e['true_count']}\t{e['false_count']}\n"
            )


@main.command("eval")
@click.option("--dictionary", "dictionary_path", type=click.Path(), default=None,
              help="Dictionary file from `expand`.")
@click.option("--corpus", type=click.Path(), default=None,
              help="Labeled line-JSON corpus.")
@click.option("--discovered-only", is_flag=True, default=False,
              help="Classify with discovered words only (W minus seeds).")
@click.option("--lr", is_flag=True, default=False,
              help="Add the per-word likelihood-ratio table.")
@click.option("--haldane", is_flag=True, default=False,
              help="Add-half smoothing for likelihood ratios.")
@click.option("--out", type=click.Path(), default=None,
              help="Report JSON (stdout when omitted).")
@click.option("--tsv", type=click.Path(), default=None,
              help="Also write the LR table as TSV (needs --lr).")
@click.option("--figures", type=click.Path(), default=None,
              help="Directory for rendered figures.")
@_corpus_options
@_common_options
@click.pass_context
@_catch
def eval_cmd(ctx, **params):
    """Score a dictionary as a classifier over a labeled corpus."""
    params = _apply_config(ctx, params)
    _require(params, "dictionary_path", "corpus")
    seeds, discovered = read_dictionary(params["dictionary_path"])
    dictionary = Dictionary(seeds=seeds, discovered=discovered, provenance={},
                            method="file", params={})
    corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                               params["no_lowercase"])
    report = evaluate(dictionary, corpus,
                      discovered_only=params["discovered_only"])
    payload = {
        "run_config": _run_config(ctx, params, params["timestamps"]),
        "discovered_only": params["discovered_only"],
        **report.to_payload(),
    }
    if params["lr"]:
        tokens = (list(dictionary.discovered) if params["discovered_only"]
                  else dictionary.all_tokens())
        payload["lr"] = _lr_section(tokens, corpus, params["haldane"])
        if params["tsv"]:
            _write_lr_tsv(params["tsv"], _jsonable(payload["lr"]))
    elif params["tsv"]:
        raise ConfigError("--tsv needs --lr for the eval command")
    _emit_report(params["out"], payload)
    if params["figures"]:
        from .figures import save_eval_figure, save_lr_figure

        written = save_eval_figure(payload, params["figures"])
        if params["lr"]:
            written += save_lr_figure(_jsonable(payload["lr"]["entries"]),
                                      params["figures"])
        for p in written:
            click.echo(f"figure: {p}", err=True)
    click.echo(
        f"macro-P/R/F1: {report.macro_precision:.4f} {report.macro_recall:.4f} "
        f"{report.macro_f1:.4f}",
        err=params["out"] is None,
    )


@main.command("sweep")
@click.option("--method",
              type=click.Choice(["lgde", "threshold", "knn", "ikea", "textrank"]),
              default=None)
@click.option("--embeddings", type=click.Path(), default=None)
@click.option("--seeds", type=click.Path(), default=None)
@click.option("--corpus", type=click.Path(), default=None,
              help="Labeled training corpus for grid scoring.")
@click.option("--k-grid", default=None, help="e.g. 3:8 or 3,5,7")
@click.option("--t-grid", default=None, help="e.g. 1:6")
@click.option("--epsilon-grid", default=None, help="e.g. 0.5:0.9:0.05")
@click.option("--window-grid", default=None, help="e.g. 2:4")
@click.option("--top-k-grid", default=None, help="e.g. 10:50:5")
@click.option("--delta", type=float, default=1.0, show_default=True)
@click.option("--max-size", type=int, default=100, show_default=True)
@click.option("--max-iterations", type=int, default=100, show_default=True)
@click.option("--damping", type=float, default=0.85, show_default=True)
@click.option("--min-discovered", type=int, default=None)
@click.option("--max-discovered", type=int, default=None)
@click.option("--discovered-only", is_flag=True, default=False,
              help="Score grid points with discovered words only.")
@click.option("--out", type=click.Path(), default=None,
              help="Sweep report JSON (stdout when omitted).")
@click.option("--tsv", type=click.Path(), default=None,
              help="Grid as TSV.")
@click.option("--figures", type=click.Path(), default=None,
              help="Directory for rendered figures.")
@click.option("--dict-out", type=click.Path(), default=None,
              help="Write the best dictionary here.")
@click.option("--threads", type=int, default=None,
              help="Worker threads over grid points (default: cores).")
@_space_options
@_corpus_options
@_common_options
@click.pass_context
@_catch
def sweep_cmd(ctx, **params):
    """Grid-search an expander under dictionary size constraints."""
    params = _apply_config(ctx, params)
    _require(params, "method", "seeds", "corpus", "min_discovered",
             "max_discovered")
    method = params["method"]
    corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                               params["no_lowercase"])

    grids = {
        "lgde": {"k": ("k_grid", int), "t": ("t_grid", int)},
        "threshold": {"epsilon": ("epsilon_grid", float)},
        "knn": {"k": ("k_grid", int)},
        "ikea": {"epsilon": ("epsilon_grid", float)},
        "textrank": {"window": ("window_grid", int), "top_k": ("top_k_grid", int)},
    }[method]
    param_grid = {
        name: _parse_grid(params[flag], cast, flag.replace("_", "-"))
        for name, (flag, cast) in grids.items()
    }

    space = None
    if method in ("lgde", "threshold", "knn", "ikea"):
        if not params["embeddings"]:
            raise ConfigError(f"--embeddings is required for method {method}")
        space = load_embeddings(params["embeddings"], min_norm=params["min_norm"],
                                allow_duplicates=params["allow_duplicates"])
        sd = _resolve_seeds_in_space(params["seeds"], space)
    else:
        vocab = sorted({t for d in corpus.documents for t in d.token_set})
        sd = _resolve_seed_file(params["seeds"],
                                {tok: i for i, tok in enumerate(vocab)}, "corpus")

    threads = params["threads"] or os.cpu_count() or 1
    result = run_sweep(
        method, param_grid, corpus,
        min_discovered=params["min_discovered"],
        max_discovered=params["max_discovered"],
        space=space, seeds=sd,
        evaluate_discovered_only=params["discovered_only"],
        delta=params["delta"], max_size=params["max_size"],
        max_iterations=params["max_iterations"], damping=params["damping"],
        threads=threads,
    )

    payload = {
        "run_config": _run_config(ctx, params, params["timestamps"]),
        **result.to_payload(),
    }
    _emit_report(params["out"], payload)
    if params["tsv"]:
        names = list(result.grid[0]["params"]) if result.grid else []
        with open(params["tsv"], "w", encoding="utf-8") as fh:
            fh.write("\t".join(names) + "\tdictionary_size\tdiscovered_size"
                     "\tadmissible\tmacro_f1\tmacro_precision\tmacro_recall\n")
            for e in result.grid:
                cells = [str(e["params"][n]) for n in names]
                cells += [str(e["dictionary_size"]), str(e["discovered_size"]),
                          str(int(e["admissible"]))]
                for key in ("macro_f1", "macro_precision", "macro_recall"):
                    cells.append("" if e[key] is None else f"{e[key]:.17g}")
                fh.write("\t".join(cells) + "\n")
    if params["dict_out"]:
        write_dictionary(result.best_dictionary, params["dict_out"])
    if params["figures"]:
        from .figures import save_sweep_figures

        for p in save_sweep_figures(_jsonable(payload), params["figures"]):
            click.echo(f"figure: {p}", err=True)
    click.echo(
        f"best {result.best['params']} macro_f1={result.best['macro_f1']:.6f} "
        f"discovered={result.best['discovered_size']}",
        err=params["out"] is None,
    )


@main.group()
def stats():
    """Per-word statistics and rank tests."""


@stats.command("lr")
@click.option("--dictionary", "dictionary_path", type=click.Path(), default=None)
@click.option("--corpus", type=click.Path(), default=None)
@click.option("--discovered-only", is_flag=True, default=False,
              help="Only discovered words.")
@click.option("--haldane", is_flag=True, default=False)
@click.option("--out", type=click.Path(), default=None)
@click.option("--tsv", type=click.Path(), default=None)
@click.option("--figures", type=click.Path(), default=None)
@_corpus_options
@_common_options
@click.pass_context
@_catch
def stats_lr(ctx, **params):
    """Per-word likelihood ratios of a dictionary over a labeled corpus."""
    params = _apply_config(ctx, params)
    _require(params, "dictionary_path", "corpus")
    seeds, discovered = read_dictionary(params["dictionary_path"])
    corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                               params["no_lowercase"])
    tokens = list(discovered) if params["discovered_only"] else list(seeds) + list(discovered)
    section = _lr_section(tokens, corpus, params["haldane"])
    payload = {
        "run_config": _run_config(ctx, params, params["timestamps"]),
        "discovered_only": params["discovered_only"],
        **section,
    }
    _emit_report(params["out"], payload)
    if params["tsv"]:
        _write_lr_tsv(params["tsv"], _jsonable(section))
    if params["figures"]:
        from .figures import save_lr_figure

        for p in save_lr_figure(_jsonable(section["entries"]), params["figures"]):
            click.echo(f"figure: {p}", err=True)
    if "median" in section:
        click.echo(f"median LR over {section['n_defined']} defined words: "
                   f"{section['median']}", err=params["out"] is None)


def _read_values(path):
    values = []
    for line in read_token_file(path):
        try:
            values.append(float(line))
        except ValueError as exc:
            raise EvaluationError(f"bad value {line!r} in {path}") from exc
    return values


@stats.command("mwu")
@click.option("--a", "a_path", type=click.Path(), default=None,
              help="Value file for sample A (one number per line).")
@click.option("--b", "b_path", type=click.Path(), default=None,
              help="Value file for sample B.")
@click.option("--dict-a", type=click.Path(), default=None,
              help="Dictionary A; with --dict-b and --corpus, compares the "
                   "likelihood ratios of words exclusive to each dictionary.")
@click.option("--dict-b", type=click.Path(), default=None)
@click.option("--corpus", type=click.Path(), default=None)
@click.option("--haldane", is_flag=True, default=False)
@click.option("--alternative",
              type=click.Choice(["greater", "less", "two-sided"]),
              default="greater", show_default=True)
@click.option("--method", type=click.Choice(["auto", "exact", "normal"]),
              default="auto", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@_corpus_options
@_common_options
@click.pass_context
@_catch
def stats_mwu(ctx, **params):
    """One-sided Mann-Whitney U over two samples of values or dictionaries."""
    params = _apply_config(ctx, params)
    if params["a_path"] and params["b_path"]:
        a = _read_values(params["a_path"])
        b = _read_values(params["b_path"])
    elif params["dict_a"] and params["dict_b"] and params["corpus"]:
        corpus = _load_corpus_opts(params["corpus"], params["stopwords"],
                                   params["no_lowercase"])
        seeds_a, disc_a = read_dictionary(params["dict_a"])
        seeds_b, disc_b = read_dictionary(params["dict_b"])
        all_b = set(seeds_b) | set(disc_b)
        all_a = set(seeds_a) | set(disc_a)
        only_a = [t for t in disc_a if t not in all_b]
        only_b = [t for t in disc_b if t not in all_a]
        a = [e.lr for e in likelihood_ratios_for_tokens(only_a, corpus,
                                                        haldane=params["haldane"])]
        b = [e.lr for e in likelihood_ratios_for_tokens(only_b, corpus,
                                                        haldane=params["haldane"])]
    else:
        raise ConfigError("pass --a/--b value files, or --dict-a/--dict-b/--corpus")
    if not a or not b:
        raise EvaluationError("one of the samples is empty")

    u, p = mann_whitney_u(a, b, alternative=params["alternative"],
                          method=params["method"])
    resolved = params["method"]
    if resolved == "auto":
        resolved = "exact" if len(a) * len(b) <= 400 else "normal"
    payload = {
        "run_config": _run_config(ctx, params, params["timestamps"]),
        "u_statistic": u,
        "p_value": p,
        "n_a": len(a),
        "n_b": len(b),
        "alternative": params["alternative"],
        "method": resolved,
    }
    _emit_report(params["out"], payload)
    click.echo(f"U={u} p={p:.6g} (n_a={len(a)}, n_b={len(b)}, {resolved})",
               err=params["out"] is None)


if __name__ == "__main__":
    main()
