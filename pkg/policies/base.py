"""Actor-critic policy over the disjunctive graph.

Pipeline: input projection (3 -> hidden) -> encoder layers -> output projection
(hidden -> embed) -> global attention pooling. The critic reads the pooled
vector; the actor scores each node from [node embedding, pooled vector].
Invalid actions get a logit of -inf before the softmax.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Literal, Protocol

import torch
from torch import Tensor, nn
from torch_geometric.nn.aggr import AttentionalAggregation

from config import ModelConfig
from disjunctive_graph import RELATIONS

from .layers import GINLayer, HGTLayer, mlp

MERGED = "merged"


class EmptyMaskError(ValueError):
    """Forward was asked to choose among zero valid actions."""


class Arch(Enum):
    HGT = "hgt"
    HOMO_HGT = "homo_hgt"
    GIN = "gin"

    @classmethod
    def parse(cls, value: "str | Arch") -> "Arch":
        if isinstance(value, cls):
            return value
        normalized = str(value).lower().replace("-", "_")
        try:
            return cls(normalized)
        except ValueError:
            raise ValueError(
                f"Unknown arch '{value}' (choose from {', '.join(a.value for a in cls)})"
            ) from None

    @property
    def label(self) -> str:
        return {"hgt": "HGT", "homo_hgt": "Homo-HGT", "gin": "GIN"}[self.value]


class GraphLike(Protocol):
    def edge_index_dict(self) -> dict[str, Tensor]: ...
    def merged_edge_index(self) -> Tensor: ...
    def feature_tensor(self) -> Tensor: ...


@dataclass(frozen=True)
class EncoderSpec:
    """How an architecture builds its layers and which arc view it consumes."""
    make_layer: Callable[[ModelConfig], nn.Module]
    typed: bool


_encoders: dict[Arch, EncoderSpec] = {}


def register_arch(arch: Arch, typed: bool) -> Callable:
    def decorator(make_layer: Callable[[ModelConfig], nn.Module]) -> Callable[[ModelConfig], nn.Module]:
        if arch in _encoders:
            raise ValueError(f"Arch '{arch.value}' is already registered")
        _encoders[arch] = EncoderSpec(make_layer, typed)
        return make_layer
    return decorator


@register_arch(Arch.HGT, typed=True)
def _hgt_layer(cfg: ModelConfig) -> nn.Module:
    return HGTLayer(cfg.hidden_dim, cfg.heads, RELATIONS, cfg.dropout)


@register_arch(Arch.HOMO_HGT, typed=False)
def _homo_hgt_layer(cfg: ModelConfig) -> nn.Module:
    return HGTLayer(cfg.hidden_dim, cfg.heads, (MERGED,), cfg.dropout)


@register_arch(Arch.GIN, typed=False)
def _gin_layer(cfg: ModelConfig) -> nn.Module:
    return GINLayer(cfg.hidden_dim)


@dataclass
class PolicyOutput:
    logits: Tensor
    value: Tensor
    log_probs: Tensor

    @property
    def probs(self) -> Tensor:
        return self.log_probs.exp()

    def entropy(self) -> Tensor:
        """Entropy over valid actions only; masked entries contribute exactly zero."""
        safe_log = self.log_probs.masked_fill(torch.isinf(self.log_probs), 0.0)
        return -(self.probs * safe_log).sum()

    def sample(self, generator: torch.Generator | None = None) -> int:
        return int(torch.multinomial(self.probs.detach(), 1, generator=generator).item())

    def greedy(self) -> int:
        """Highest logit; ties resolve to the lowest node id."""
        return int(torch.argmax(self.logits.detach()).item())


class PolicyModel(nn.Module):
    """Encoder, pooling, actor and critic as one module (float64)."""

    def __init__(self, config: ModelConfig, generator: torch.Generator | None = None) -> None:
        super().__init__()
        self.config = config
        self.arch = Arch.parse(config.arch)
        self.spec = _encoders[self.arch]
        hidden, embed = config.hidden_dim, config.embed_dim

        self.input_proj = nn.Linear(config.in_features, hidden)
        self.layers = nn.ModuleList(self.spec.make_layer(config) for _ in range(config.layers))
        self.output_proj = nn.Linear(hidden, embed)
        self.pool = AttentionalAggregation(gate_nn=mlp(embed, hidden, 1))
        self.actor = mlp(2 * embed, hidden, 1)
        self.critic = mlp(embed, hidden, 1)

        self.double()
        self.reset_parameters(generator)

    def reset_parameters(self, generator: torch.Generator | None = None) -> None:
        """Kaiming-uniform (fan-in) weights, zero biases, unit LayerNorm."""
        for module in self.modules():
            if isinstance(module, nn.Linear):
                nn.init.kaiming_uniform_(module.weight, nonlinearity="relu", generator=generator)
                if module.bias is not None:
                    nn.init.zeros_(module.bias)
            elif isinstance(module, nn.LayerNorm):
                nn.init.ones_(module.weight)
                nn.init.zeros_(module.bias)

    def edges_for(self, graph: GraphLike) -> dict[str, Tensor]:
        if self.spec.typed:
            return graph.edge_index_dict()
        return {MERGED: graph.merged_edge_index()}

    def encode(self, features: Tensor, edges: dict[str, Tensor]) -> Tensor:
        h = self.input_proj(features)
        for layer in self.layers:
            h = layer(h, edges)
        return self.output_proj(h)

    def pooled(self, embeddings: Tensor) -> Tensor:
        index = torch.zeros(embeddings.size(0), dtype=torch.long)
        return self.pool(embeddings, index=index, dim_size=1).squeeze(0)

    def forward(self, graph: GraphLike, mask: Tensor, features: Tensor | None = None) -> PolicyOutput:
        """Score every node; ``features`` overrides the graph's current features."""
        mask = torch.as_tensor(mask, dtype=torch.bool)
        if not mask.any():
            raise EmptyMaskError("action mask has no valid entries")
        x = graph.feature_tensor() if features is None else torch.as_tensor(features, dtype=torch.float64)

        embeddings = self.encode(x, self.edges_for(graph))
        g_vec = self.pooled(embeddings)
        value = self.critic(g_vec).squeeze(-1)

        actor_in = torch.cat([embeddings, g_vec.expand_as(embeddings)], dim=-1)
        logits = self.actor(actor_in).squeeze(-1).masked_fill(~mask, float("-inf"))
        return PolicyOutput(logits=logits, value=value, log_probs=torch.log_softmax(logits, dim=-1))


def build_policy(config: ModelConfig, generator: torch.Generator | None = None) -> PolicyModel:
    return PolicyModel(config, generator)


def forward(
    model: PolicyModel,
    graph: GraphLike,
    mask: Tensor,
    mode: Literal["train", "eval"] = "eval",
) -> PolicyOutput:
    """Run the policy with dropout on (``train``) or off (``eval``)."""
    model.train(mode == "train")
    return model(graph, mask)


def count_parameters(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())


def parameter_breakdown(model: PolicyModel) -> dict[str, int]:
    """Parameter count per top-level block."""
    return {name: count_parameters(child) for name, child in model.named_children()}


def relation_projection_size(model: PolicyModel) -> int:
    """Size of one relation's key/value projections summed over all layers."""
    total = 0
    for layer in model.layers:
        if isinstance(layer, HGTLayer):
            rel = layer.relations[0]
            total += count_parameters(layer.key[rel]) + count_parameters(layer.value[rel])
    return total
