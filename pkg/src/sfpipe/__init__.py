"""Situation-frame topic classification pipeline for tokenized speech documents."""

__version__ = "0.1.0"
