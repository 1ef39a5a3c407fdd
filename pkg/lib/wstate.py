"""W-state preparation on arbitrary qubit subsets, optionally multi-controlled.

Two constructions produce the same state, an equal real superposition of the
n one-hot patterns over the targets:

* chain: X on the first target, then a controlled-RY / CX pair walking the
  excitation along the list (depth 2n - 1).
* tree: X on the first target, then recursive halving of the excitation
  between the two halves of each group (depth 1 + 2 * ceil(log2 n)).
"""

import math
from typing import List, Sequence

from lib.circuit import Instruction, add_controls, cx, mcry, x
from lib.errors import WStateError

CHAIN = "chain"
TREE = "tree"
STRATEGIES = (CHAIN, TREE)


def _check_targets(targets: Sequence[int]) -> None:
    if not targets:
        raise WStateError("W-state needs at least one target")
    if len(set(targets)) != len(targets):
        raise WStateError(f"W-state targets repeat a qubit: {list(targets)}")


def _split(holder: int, source: int, share: float) -> List[Instruction]:
    """Move `share` of the holder's excitation probability onto the |0> source qubit."""
    theta = 2 * math.asin(math.sqrt(share))
    return [mcry(theta, [holder], source), cx(source, holder)]


def _chain(targets: Sequence[int]) -> List[Instruction]:
    n = len(targets)
    gates = [x(targets[0])]
    for k in range(1, n):
        gates.extend(_split(targets[k - 1], targets[k], (n - k) / (n - k + 1)))
    return gates


def _tree_group(group: Sequence[int]) -> List[Instruction]:
    m = len(group)
    if m == 1:
        return []
    moved = m // 2
    left, right = group[:m - moved], group[m - moved:]
    gates = _split(left[0], right[0], moved / m)
    gates.extend(_tree_group(left))
    gates.extend(_tree_group(right))
    return gates


def _tree(targets: Sequence[int]) -> List[Instruction]:
    return [x(targets[0])] + _tree_group(targets)


def build_w(targets: Sequence[int], strategy: str = CHAIN) -> List[Instruction]:
    """Instructions preparing |W_n> on targets that start in |0...0>.

    Raises:
        WStateError: empty or repeated targets, or unknown strategy
    """
    _check_targets(targets)
    if strategy == CHAIN:
        return _chain(targets)
    if strategy == TREE:
        return _tree(targets)
    raise WStateError(f"Unknown W-state strategy '{strategy}'")


def build_controlled_w(controls: Sequence[int], targets: Sequence[int], strategy: str = CHAIN) -> List[Instruction]:
    """build_w with every gate additionally controlled on all of `controls`.

    Acts as build_w on the all-controls-1 subspace and as identity elsewhere.
    """
    overlap = set(controls) & set(targets)
    if overlap:
        raise WStateError(f"Controls and targets overlap on {sorted(overlap)}")
    if len(set(controls)) != len(controls):
        raise WStateError(f"W-state controls repeat a qubit: {list(controls)}")
    return [add_controls(gate, controls) for gate in build_w(targets, strategy)]


def w_depth_bound(n: int, strategy: str = CHAIN) -> int:
    """Upper bound on depth(build_w) over n targets."""
    if n < 1:
        raise WStateError(f"W-state size must be at least 1, got {n}")
    if strategy == CHAIN:
        return 2 * n - 1
    if strategy == TREE:
        return 1 + 2 * math.ceil(math.log2(n))
    raise WStateError(f"Unknown W-state strategy '{strategy}'")
