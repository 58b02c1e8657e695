"""MetaBound Lab.

An exact-computation laboratory for studying how meta-reinforcement-learning
generalization scales with the number of training tasks and the variability
of the task distribution.

Features:
- Tabular MDPs with exact evaluation, value iteration and policy gradients
- Seeded task families with a single variability knob
- MAML-style meta-training (first-order and full meta-gradients)
- From-scratch baselines and adaptation-speed comparison
- Concentration intervals, Rademacher estimates and scaling-law fits
- Deterministic sweeps with canonical CSV/JSON output
"""

__version__ = "0.1.0"
__license__ = "MIT"
