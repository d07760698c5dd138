"""Degree -R deformation data of affine toric varieties, computed exactly."""
