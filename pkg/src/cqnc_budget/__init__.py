"""Added-force noise budget for a hybrid optomechanical force sensor.

A movable-mirror cavity with an intracavity OPA and a quantum-dot ensemble
whose collective mode can cancel radiation-pressure back action.
"""

__version__ = "0.1.0"
