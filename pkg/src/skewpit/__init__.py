"""Identity testing for powerful skew circuits and its applications."""
