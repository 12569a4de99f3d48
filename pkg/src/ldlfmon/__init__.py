"""Runtime monitoring of LTLf/LDLf formulas and Declare models."""
