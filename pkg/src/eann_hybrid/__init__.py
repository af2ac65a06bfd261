# src/eann_hybrid/__init__.py
"""
Hybrid evolutionary neural networks: a genetic search over architectures,
transfer functions, initial weights and local trainers, with BP/SCG/QNA/LM
fine-tuning of every candidate.
"""
__version__ = "0.1.0"
