"""Figure rendering for fedspec metrics CSVs."""

from .figures import PlotSpec, learning_curve, parse_participants, participation_bar
from .io import EpisodeSeries, SchemaError, read_episode_series
from .series import centered_moving_average, trailing_mean

__version__ = "0.1.0"
