"""Message-passing layers and MLP heads.

Every encoder layer takes node states ``h`` of shape [N, hidden] and a dict of
``edge_index`` tensors keyed by relation name. Heterogeneous models pass one
entry per relation; homogeneous ones pass a single merged entry.
"""

import math

import torch
from torch import Tensor, nn
from torch_geometric.nn import GINConv
from torch_geometric.utils import scatter, softmax


def mlp(in_dim: int, hidden_dim: int, out_dim: int) -> nn.Sequential:
    """Two-layer perceptron with a ReLU in between."""
    return nn.Sequential(
        nn.Linear(in_dim, hidden_dim),
        nn.ReLU(),
        nn.Linear(hidden_dim, out_dim),
    )


class HGTLayer(nn.Module):
    """Multi-head graph attention with per-relation key/value projections.

    Queries are shared (one node type). Scores from all incoming arcs of all
    relations are normalised together at each destination node. A node with no
    incoming arcs receives a zero message and ``out`` has no bias, so such a
    node comes out as LayerNorm(h).

        h' = LayerNorm(h + Dropout(ReLU(W_O [head_1 .. head_H])))
    """

    def __init__(self, hidden_dim: int, heads: int, relations: tuple[str, ...], dropout: float) -> None:
        super().__init__()
        if hidden_dim % heads:
            raise ValueError(f"hidden_dim {hidden_dim} is not divisible by {heads} heads")
        self.hidden_dim = hidden_dim
        self.heads = heads
        self.head_dim = hidden_dim // heads
        self.relations = tuple(relations)
        self.query = nn.Linear(hidden_dim, hidden_dim)
        self.key = nn.ModuleDict({rel: nn.Linear(hidden_dim, hidden_dim) for rel in self.relations})
        self.value = nn.ModuleDict({rel: nn.Linear(hidden_dim, hidden_dim) for rel in self.relations})
        self.out = nn.Linear(hidden_dim, hidden_dim, bias=False)
        self.norm = nn.LayerNorm(hidden_dim)
        self.dropout = nn.Dropout(dropout)

    def forward(self, h: Tensor, edge_index_dict: dict[str, Tensor]) -> Tensor:
        n = h.size(0)
        q = self.query(h).view(n, self.heads, self.head_dim)

        keys, values, targets = [], [], []
        for rel in self.relations:
            src, dst = edge_index_dict[rel]
            keys.append(self.key[rel](h)[src].view(-1, self.heads, self.head_dim))
            values.append(self.value[rel](h)[src].view(-1, self.heads, self.head_dim))
            targets.append(dst)
        k = torch.cat(keys)
        v = torch.cat(values)
        dst = torch.cat(targets)

        scores = (q[dst] * k).sum(dim=-1) / math.sqrt(self.head_dim)
        alpha = softmax(scores, dst, num_nodes=n)
        message = scatter(alpha.unsqueeze(-1) * v, dst, dim=0, dim_size=n, reduce="sum")

        update = torch.relu(self.out(message.reshape(n, self.hidden_dim)))
        return self.norm(h + self.dropout(update))


class GINLayer(nn.Module):
    """h'_v = MLP(h_v + sum of incoming neighbours), epsilon fixed at 0."""

    def __init__(self, hidden_dim: int) -> None:
        super().__init__()
        self.conv = GINConv(mlp(hidden_dim, hidden_dim, hidden_dim), eps=0.0, train_eps=False)

    def forward(self, h: Tensor, edge_index_dict: dict[str, Tensor]) -> Tensor:
        edge_index = torch.cat(list(edge_index_dict.values()), dim=1)
        return self.conv(h, edge_index)
