# pylint: disable=no-value-for-parameter
"""Command line interface of the liveness verification pipeline."""
from __future__ import annotations

import dataclasses
import json
import logging
from pathlib import Path

import click
import coloredlogs
import numpy as np
import pandas as pd

from .attacks import ATTACKS, build_attack_dataset, stitch_dataset
from .chunking import chunk_samples, sequential_chunks
from .config import ChunkConfig, load_config
from .experiments import EXPERIMENTS, contingency_table, features_frame, format_table, read_report, report, run_experiment
from .features import FEATURE_NAMES, features_matrix
from .fusion import (
    METHODS,
    PriorRates,
    SampleVerdict,
    VerdictReport,
    fuse,
    load_priors,
    sample_feature_names,
    sample_features,
    save_priors,
)
from .io import (
    load_accel_csv,
    load_chunks,
    load_features_csv,
    load_samples,
    read_frames,
    save_chunks,
    save_features_csv,
    save_motion_csv,
    save_samples,
)
from .learning import classify_chunks, encode_labels, evaluate, load_model, save_model, train_model, training_verdicts
from .model import Label
from .motion import ima, vma
from .synth import campaign_spec, corpus_spec_from_json, gen_corpus

logger = logging.getLogger(__name__)

STRATEGIES = {"seq": "sequential", "segment": "segment", "random": "randomized"}


@click.group()
@click.option("-v", "--verbose", count=True, help="Repeat to raise the log level (INFO, DEBUG).")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON or YAML experiment configuration.",
)
@click.pass_context
def main(ctx, verbose, config_path):
    """Video liveness verification from video and accelerometer motion."""
    if verbose == 0:
        level = "WARNING"
    elif verbose == 1:
        level = "INFO"
    else:
        level = "DEBUG"
    coloredlogs.install(level=level, fmt="%(asctime)s %(levelname)s %(message)s", datefmt="%H:%M:%S")
    ctx.ensure_object(dict)
    ctx.obj["config"] = load_config(config_path)


# -- motion extraction ---------------------------------------------------------
@main.command("extract-vma", short_help="video motion of a frame directory")
@click.option("--frames", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--stride", type=int, default=None, help="Frame stride, from the configuration by default.")
@click.option("--fps", type=float, default=None, help="Frame rate, from the configuration by default.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_obj
def extract_vma(obj, frames, stride, fps, out):
    """Estimate the cumulative camera displacement of a directory of PGM frames."""
    c = obj["config"].motion
    trace = vma(read_frames(frames, fps or c.fps), stride or c.stride, c.subpixel, c.hann)
    save_motion_csv(trace, out)
    click.echo(f"{trace.t.size} motion points written to {out}")


@main.command("extract-ima", short_help="motion of an accelerometer CSV")
@click.option("--accel", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--alpha", type=float, default=None, help="Gravity low-pass coefficient.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_obj
def extract_ima(obj, accel, alpha, out):
    """Derive the device displacement from accelerometer readings."""
    c = obj["config"].motion
    alpha = c.alpha if alpha is None else alpha
    trace = ima(load_accel_csv(accel), alpha, c.stillness_threshold, c.stillness_window, c.unit_scale)
    save_motion_csv(trace, out)
    click.echo(f"{trace.t.size} motion points written to {out}")


# -- datasets ------------------------------------------------------------------
@main.command("synth", short_help="generate a synthetic genuine corpus")
@click.option("--spec", "spec_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="JSON mapping category id to {count, duration}; the campaign distribution by default.")  # fmt: skip
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.pass_obj
def synth(obj, spec_path, seed, out):
    """Write synthetic sample manifests with their motion and accelerometer CSVs."""
    c = obj["config"]
    if spec_path is None:
        spec = campaign_spec(c.chunking.length)
    else:
        spec = corpus_spec_from_json(json.loads(spec_path.read_text()))
    samples = gen_corpus(spec, c.seed if seed is None else seed, c.synth)
    save_samples(samples, out)
    click.echo(f"{len(samples)} samples written to {out}")


@main.command("chunk", short_help="split samples into chunks")
@click.option("--samples", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--strategy", type=click.Choice(list(STRATEGIES)), default=None)
@click.option("--len", "length", type=float, default=None, help="Chunk length in seconds.")
@click.option("--k", type=int, default=None, help="Chunks per sample of the random strategy.")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.pass_obj
def chunk(obj, samples, strategy, length, k, seed, out):
    """Write one manifest per chunk."""
    c = obj["config"]
    overrides = {"strategy": STRATEGIES[strategy] if strategy else None, "length": length, "k": k}
    config = ChunkConfig.from_dict({**c.chunking.to_dict(), **{key: v for key, v in overrides.items() if v is not None}})
    chunks = chunk_samples(load_samples(samples), config, c.motion, c.seed if seed is None else seed)
    save_chunks(chunks, out)
    click.echo(f"{len(chunks)} chunks written to {out}")


@main.command("features", short_help="chunk descriptors table")
@click.option("--chunks", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True, multiple=True,
              help="Chunk directory, repeat to merge genuine and fake chunks.")  # fmt: skip
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_obj
def features(obj, chunks, out):
    """Compute the 18 DTW descriptors of every chunk."""
    frame = features_frame([ch for folder in chunks for ch in load_chunks(folder)], obj["config"].features)
    save_features_csv(frame, out)
    click.echo(f"{len(frame)} chunk descriptors written to {out}")


@main.command("attack", short_help="fabricate fake chunks or samples")
@click.option("--type", "attack", type=click.Choice([*ATTACKS, "stitch"]), required=True)
@click.option("--chunks", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Genuine chunks to attack.")  # fmt: skip
@click.option("--samples", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Genuine samples to stitch.")  # fmt: skip
@click.option("--pool", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Fake chunks spliced by the stitch attack.")  # fmt: skip
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.pass_obj
def attack(obj, attack, chunks, samples, pool, seed, out):
    """Write the fake chunk manifests of a chunk attack, or the sample manifests of the stitch attack."""
    c = obj["config"]
    seed = c.seed if seed is None else seed
    if attack == "stitch":
        if samples is None or pool is None:
            raise click.UsageError("The stitch attack needs --samples and --pool")
        genuine = [s for s in load_samples(samples) if s.label is Label.GENUINE]
        fakes = stitch_dataset(genuine, load_chunks(pool), c.attacks.stitch_count, seed, c.chunking.length, c.motion)
        save_samples(fakes, out)
        click.echo(f"{len(fakes)} stitched samples written to {out}")
        return
    if chunks is None:
        raise click.UsageError(f"The {attack} attack needs --chunks")
    genuine_chunks = [ch for ch in load_chunks(chunks) if ch.label is Label.GENUINE]
    dataset = build_attack_dataset(genuine_chunks, attack, seed, c.attacks)
    save_chunks(dataset.fake, out)
    click.echo(f"{len(dataset.fake)} {attack} chunks written to {out}")


# -- learning ------------------------------------------------------------------
def _sample_descriptors(samples, chunk_model, priors, config) -> tuple[np.ndarray, list]:
    rows, labels = [], []
    for s in samples:
        chunks = sequential_chunks(s, config.chunking.length, motion_config=config.motion)
        if not chunks:
            continue
        X = features_matrix(chunks, config.features)
        descriptor = sample_features(X, classify_chunks(chunk_model, X), priors)
        rows.append(descriptor.as_array(config.fusion.max_labels))
        labels.append(s.label)
    return np.array(rows), labels


@main.command("train", short_help="train a chunk or sample classifier")
@click.option("--level", type=click.Choice(["chunk", "sample"]), default="chunk")
@click.option("--features", "features_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Chunk descriptor table of the chunk level.")  # fmt: skip
@click.option("--samples", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Labelled samples of the sample level.")  # fmt: skip
@click.option("--chunk-model", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--priors", "priors_path", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Priors written at the chunk level, read at the sample level.")  # fmt: skip
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_obj
def train(obj, level, features_path, samples, chunk_model, priors_path, seed, out):
    """Train a classifier and write it as versioned JSON."""
    c = obj["config"]
    seed = c.seed if seed is None else seed
    if level == "chunk":
        if features_path is None:
            raise click.UsageError("The chunk level needs --features")
        frame = load_features_csv(features_path)
        X, y = frame[list(FEATURE_NAMES)].to_numpy(dtype=float), encode_labels(frame["label"])
        model = train_model(X, y, c.model, seed)
        if priors_path is not None:
            verdicts = training_verdicts(model, X)
            save_priors(PriorRates.from_training(y, evaluate([v.label for v in verdicts], y)), priors_path)
    else:
        if samples is None or chunk_model is None or priors_path is None:
            raise click.UsageError("The sample level needs --samples, --chunk-model and --priors")
        SX, sy = _sample_descriptors(load_samples(samples), load_model(chunk_model), load_priors(priors_path), c)
        names = sample_feature_names(c.fusion.max_labels)
        model = train_model(SX, sy, c.model, seed, feature_names=names)
    save_model(model, out)
    click.echo(f"{level} model written to {out}")


@main.command("predict", short_help="classify chunk descriptors")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--features", "features_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
def predict(model_path, features_path, out):
    """Write (or print) the label and fake score of every chunk."""
    frame = load_features_csv(features_path)
    verdicts = classify_chunks(load_model(model_path), frame[list(FEATURE_NAMES)].to_numpy(dtype=float))
    table = pd.DataFrame(
        {"id": frame["id"], "label": [v.label.value for v in verdicts], "score": [v.score for v in verdicts]}
    )
    if out is None:
        click.echo(table.to_string(index=False))
    else:
        table.to_csv(out, index=False, float_format=None)
        click.echo(f"{len(table)} predictions written to {out}")


@main.command("verdict", short_help="sample level decision")
@click.option("--samples", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--method", type=click.Choice(list(METHODS)), default="vote")
@click.option("--thr", type=float, default=None, help="Threshold of the vote and prob methods.")
@click.option("--priors", "priors_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--sample-model", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_obj
def verdict(obj, samples, model_path, method, thr, priors_path, sample_model, out):
    """Fuse the chunk verdicts of every sample and emit the verdict report as JSON."""
    c = obj["config"]
    if method != "model" and thr is None:
        raise click.UsageError(f"The {method} method needs --thr")
    if method != "vote" and priors_path is None:
        raise click.UsageError(f"The {method} method needs --priors")
    if method == "model" and sample_model is None:
        raise click.UsageError("The model method needs --sample-model")
    chunk_model = load_model(model_path)
    priors = load_priors(priors_path) if priors_path else None
    fusion_model = load_model(sample_model) if sample_model else None
    decisions = []
    for s in load_samples(samples):
        chunks = sequential_chunks(s, c.chunking.length, motion_config=c.motion)
        if not chunks:
            continue
        X = features_matrix(chunks, c.features)
        verdicts = classify_chunks(chunk_model, X)
        score, label = fuse(method, verdicts, thr, priors, fusion_model, X, c.fusion.max_labels)
        labels, scores = tuple(v.label for v in verdicts), tuple(v.score for v in verdicts)
        decisions.append(SampleVerdict(s.id, labels, scores, score, label, s.label))
    text = VerdictReport(method, thr, tuple(decisions)).to_json()
    if out is None:
        click.echo(text)
    else:
        out.write_text(text)
        click.echo(f"{len(decisions)} sample verdicts written to {out}")


# -- evaluation ----------------------------------------------------------------
@main.command("eval", short_help="run an experiment")
@click.option("--experiment", type=click.Choice(list(EXPERIMENTS)), required=True)
@click.option("--attack", type=str, default=None, help="Attack of the category experiments.")
@click.option("--features", "features_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="Chunk descriptor table with genuine and fake chunks.")  # fmt: skip
@click.option("--samples", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None,
              help="Genuine and stitched samples of the sample experiment.")  # fmt: skip
@click.option("--seed", type=int, default=None)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.pass_obj
def eval_(obj, experiment, attack, features_path, samples, seed, plot_path, out):
    """Run an experiment and write its rate table as text, CSV and JSON."""
    c = obj["config"]
    if seed is not None:
        c = dataclasses.replace(c, seed=seed)
    if experiment == "sample":
        if samples is None:
            raise click.UsageError("The sample experiment needs --samples")
        corpus = load_samples(samples)
        genuine = [s for s in corpus if s.label is Label.GENUINE]
        fakes = [s for s in corpus if s.label is Label.FAKE]
        results, key = run_experiment(experiment, config=c, genuine=genuine, fakes=fakes)
    else:
        if features_path is None:
            raise click.UsageError(f"The {experiment} experiment needs --features")
        if experiment in ("cat", "mixed", "novelty") and attack is None:
            raise click.UsageError(f"The {experiment} experiment needs --attack")
        results, key = run_experiment(experiment, load_features_csv(features_path), attack, c)
    click.echo(report(results, key, out, experiment))
    if key == "Category":
        contingency_table(results).to_csv(out / f"{experiment}_contingency.csv")
    if plot_path is not None:
        from .plot import plot_rates

        ax = plot_rates(results, key)
        ax.figure.savefig(plot_path, bbox_inches="tight")


@main.command("report", short_help="print a written rate table")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--key", type=click.Choice(["Category", "Attack", "Algo"]), default="Category")
def report_(input_path, key):
    """Print a CSV or JSON table written by ``eval``."""
    click.echo(format_table(read_report(input_path, key)))


if __name__ == "__main__":
    main(obj={})
