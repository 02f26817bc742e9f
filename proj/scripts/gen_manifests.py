#!/usr/bin/env python3
"""Generate layer manifests for the bundled CNN workloads.

Walks the torchvision model definitions (eval mode, batch-1 224x224 input),
records every executed Conv2d/Linear with its observed input geometry, and
writes one manifest per model in the line-oriented format documented in
README.md. Also prints the per-model MAC totals that the test suite freezes
as an independent cross-check.

Usage: python3 scripts/gen_manifests.py [output_dir]
"""

import sys
from pathlib import Path

import torch
import torchvision.models as models

MODELS = {
    "mobilenet_v2": lambda: models.mobilenet_v2(weights=None),
    "shufflenet_v2": lambda: models.shufflenet_v2_x1_0(weights=None),
    "resnet50": lambda: models.resnet50(weights=None),
    "googlenet": lambda: models.googlenet(weights=None, aux_logits=True, init_weights=True),
}


def trace_layers(model):
    """Run one forward pass and capture every executed conv/fc layer in order."""
    layers = []
    hooks = []

    def conv_hook(name, module):
        def fn(mod, inputs, output):
            x = inputs[0]
            if mod.dilation != (1, 1):
                raise ValueError(f"{name}: dilated convs not supported")
            if mod.kernel_size[0] != mod.kernel_size[1]:
                raise ValueError(f"{name}: non-square kernel")
            if mod.stride[0] != mod.stride[1] or mod.padding[0] != mod.padding[1]:
                raise ValueError(f"{name}: asymmetric stride/padding")
            layers.append(
                dict(
                    kind="conv",
                    name=name,
                    in_h=x.shape[2],
                    in_w=x.shape[3],
                    in_c=mod.in_channels,
                    out_c=mod.out_channels,
                    kernel=mod.kernel_size[0],
                    stride=mod.stride[0],
                    padding=mod.padding[0],
                    groups=mod.groups,
                )
            )
        return fn

    def fc_hook(name, module):
        def fn(mod, inputs, output):
            layers.append(
                dict(
                    kind="fc",
                    name=name,
                    in_features=mod.in_features,
                    out_features=mod.out_features,
                )
            )
        return fn

    for name, module in model.named_modules():
        if isinstance(module, torch.nn.Conv2d):
            hooks.append(module.register_forward_hook(conv_hook(name, module)))
        elif isinstance(module, torch.nn.Linear):
            hooks.append(module.register_forward_hook(fc_hook(name, module)))

    model.eval()
    with torch.no_grad():
        model(torch.zeros(1, 3, 224, 224))
    for h in hooks:
        h.remove()
    return layers


def layer_macs(layer):
    """Multiply count for one layer, computed from the traced geometry alone."""
    if layer["kind"] == "fc":
        return layer["in_features"] * layer["out_features"]
    out_h = (layer["in_h"] + 2 * layer["padding"] - layer["kernel"]) // layer["stride"] + 1
    out_w = (layer["in_w"] + 2 * layer["padding"] - layer["kernel"]) // layer["stride"] + 1
    g = layer["groups"]
    return out_h * out_w * layer["kernel"] * layer["kernel"] * (layer["in_c"] // g) * layer["out_c"]


def write_manifest(path, model_name, layers):
    lines = ["# spogasim layer manifest v1"]
    lines.append(f"model {model_name}")
    lines.append("# generated by scripts/gen_manifests.py from the torchvision "
                 "model definition (eval mode, 1x3x224x224 input)")
    for lyr in layers:
        if lyr["kind"] == "conv":
            fields = (
                f"conv name={lyr['name']} in={lyr['in_h']}x{lyr['in_w']}x{lyr['in_c']} "
                f"out_c={lyr['out_c']} kernel={lyr['kernel']}x{lyr['kernel']} "
                f"stride={lyr['stride']} pad={lyr['padding']}"
            )
            if lyr["groups"] != 1:
                fields += f" groups={lyr['groups']}"
            lines.append(fields)
        else:
            lines.append(
                f"fc name={lyr['name']} in_features={lyr['in_features']} "
                f"out_features={lyr['out_features']}"
            )
    path.write_text("\n".join(lines) + "\n")


def main():
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent.parent / "data" / "manifests"
    out_dir.mkdir(parents=True, exist_ok=True)
    for model_name, ctor in MODELS.items():
        layers = trace_layers(ctor())
        write_manifest(out_dir / f"{model_name}.manifest", model_name, layers)
        convs = sum(1 for l in layers if l["kind"] == "conv")
        fcs = sum(1 for l in layers if l["kind"] == "fc")
        total = sum(layer_macs(l) for l in layers)
        print(f"{model_name}: {convs} conv + {fcs} fc layers, {total} MACs")


if __name__ == "__main__":
    main()
