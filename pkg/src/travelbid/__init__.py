"""Bidding under uncertainty in simultaneous travel auctions.

Price prediction (flights, hotels, entertainment), scenario-based bid
optimization, marginal-utility baselines, controlled experiments, and
prediction metrics for a simulated travel market.
"""

__version__ = "0.1.0"
