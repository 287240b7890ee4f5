"""syllogic: neuro-symbolic syllogistic reasoning and evaluation toolkit."""

__version__ = "0.1.0"
