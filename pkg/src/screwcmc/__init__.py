"""Screw-motion CMC surfaces in E(kappa, tau)."""
