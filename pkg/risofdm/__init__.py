# RIS-enhanced OFDM link-level simulation package
__version__ = "1.0.0"
