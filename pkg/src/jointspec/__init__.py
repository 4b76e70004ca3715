"""Joint spectra of Lie-algebra representations via Koszul homology."""
