"""Diagnostic charts of motion traces and metric tables."""
from __future__ import annotations

from typing import Mapping

import numpy as np
from matplotlib import pyplot as plt
from matplotlib.axes import Axes

from .learning import ConfusionRates
from .model import Chunk

_RATE_NAMES = {"TPR": "tpr", "FPR": "fpr", "FNR": "fnr", "Acc": "accuracy"}


def plot_data(
    type: str,
    data: dict,
    label_name: str,
    colors: list | None = None,
    ax: Axes | None = None,
    **kwargs,
) -> Axes:
    """Draw labelled series on a chart.

    The shape of the data should be as follows:

    .. code-block::

        {
            "label1": {"property1": value1, "property2": value2, ...},
            "label2": {"property1": value1, "property2": value2, ...},
            ...
        }

    Parameters:
        type: ``"plot"`` draws one line per label over the properties, ``"bar"`` groups one bar
            per label above each property.
        data: The data to draw.
        label_name: The name of what the labels are.
        colors: Colors of the labels, the ``tab10`` colors by default.
        ax: The axes to draw on, a new figure is created when not provided.
        kwargs: Additional arguments of the matplotlib call.

    Returns:
        The axes.
    """
    if ax is None:
        _, ax = plt.subplots()

    labels = list(data.keys())
    if not labels:
        raise ValueError("Nothing to plot")
    props = list(data[labels[0]].keys())
    colors = colors if colors else plt.get_cmap("tab10").colors

    if type == "plot":
        for i, label in enumerate(labels):
            kwargs["color"] = colors[i % len(colors)]
            ax.plot(list(data[label].keys()), list(data[label].values()), label=label, **kwargs)
        grid_axis = "both"

    elif type == "bar":
        x = np.arange(len(props))
        width = 1 / (len(labels) + 0.8)
        margin = width / 10
        kwargs["width"] = width - margin
        ax.set_xticks(x + width * (len(labels) - 1) / 2, props)
        for i, label in enumerate(labels):
            kwargs["color"] = colors[i % len(colors)]
            ax.bar(x + width * i, [data[label][p] for p in props], label=label, **kwargs)
        ax.set_xlabel(label_name)
        grid_axis = "y"

    else:
        raise ValueError(f"Type {type} is not (yet?) supported")

    ax.grid(axis=grid_axis)
    ax.set_axisbelow(True)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.legend(bbox_to_anchor=(1.02, 1), loc="upper left")

    # make sure the canvas is only rendered once.
    ax.figure.canvas.draw_idle()

    return ax


def plot_traces(chunk: Chunk, axis: str = "x", ax: Axes | None = None, **kwargs) -> Axes:
    """Overlay the video and accelerometer motion of one axis of a chunk.

    Parameters:
        chunk: The chunk.
        axis: ``"x"`` or ``"y"``.
        ax: The axes to draw on.
        kwargs: Additional arguments of ``Axes.plot``.

    Returns:
        The axes, time in seconds from the chunk start on the x axis.
    """
    data = {
        "video": dict(zip(chunk.video_motion.t, chunk.video_motion.axis(axis))),
        "accelerometer": dict(zip(chunk.accel_motion.t, chunk.accel_motion.axis(axis))),
    }
    ax = plot_data("plot", data, "stream", ax=ax, **kwargs)
    ax.set_xlabel("Time (s)")
    ax.set_ylabel(f"Displacement along {axis}")
    ax.set_title(f"{chunk.id} ({chunk.label.value})")
    return ax


def plot_rates(results: Mapping[str, ConfusionRates], label_name: str = "Category", ax: Axes | None = None, **kwargs) -> Axes:
    """Bar chart of the TPR, FPR, FNR and accuracy (in %) of each result."""
    data = {
        column: {name: 100 * getattr(r, attr) for name, r in results.items()}
        for column, attr in _RATE_NAMES.items()
    }
    ax = plot_data("bar", data, label_name, ax=ax, **kwargs)
    ax.set_ylabel("%")
    ax.set_ylim(0, 100)
    return ax
