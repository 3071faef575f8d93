"""Latent-variable generative model for non-contrastive self-supervised learning.

The compiled extension carries the full API: samplers for the z -> x -> x+
chain, the exact likelihood objective, the closed-form PCA and SSL
estimators with a numeric cross-check, a Metropolis-Hastings posterior
sampler, and the sweep/demo experiment harness.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
