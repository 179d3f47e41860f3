"""Interactive estimation: learners, dimension calculators and bounds."""
