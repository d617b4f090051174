"""Tests pour volclust."""
