"""Capacity regions and power planning for RF-energy-harvesting links."""
