"""Two-channel EOG communication pipeline.

Filtering through biquad cascades, per-user calibration, threshold event
classification and mapping of eye movements to display/audio commands.
"""

__version__ = "0.1.0"
