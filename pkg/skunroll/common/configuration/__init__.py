from .basic_configuration import BasicConfiguration  # noqa: F401
from .utils import make_configuration, load_configuration_file, dump_configuration_file  # noqa: F401

from .exceptions import (  # noqa: F401
    ConfigurationException, ConfigEntryMissingException, ConfigEnvValueCannotBeCoercedException, ConfigIntegrityException,
    ConfigFileNotFoundException, ConfigFileFormatException)
