""" Units used by the package, built on quantities. Adds the latex symbols used in plot labels and the table of unit
suffixes accepted in scenario keys (``sigma_m``, ``duration_min`` ...)
"""
from quantities import *

rad_s = radian_per_second = CompoundUnit('rad/s')
rad_s.latex_symbol = 'rad/s'

m_s = metre_per_second = CompoundUnit('m/s')
m_s.latex_symbol = 'm/s'

per_s = per_second = CompoundUnit('1/s')
per_s.latex_symbol = 's^{-1}'

per_m = per_metre = CompoundUnit('1/m')
per_m.latex_symbol = 'm^{-1}'

# suffix -> unit, longest suffixes are matched first so 'm_s' wins over 's'
unitSuffixes = {
    'm': m,
    'cm': cm,
    'mm': mm,
    's': s,
    'ms': ms,
    'min': minute,
    'm_s': m_s,
    'per_s': per_s,
    'per_m': per_m,
    'rad': radian,
    'deg': degree,
    'rad_s': rad_s,
}


def splitUnitKey(key):
    """ Splits a scenario key into its name and unit, ie 'sigma_m' -> ('sigma', m). Keys without a known suffix are
    dimensionless and returned with a unit of None

    :param key: xml tag of a scenario value
    :return: (name, unit or None)
    """

    for suffix in sorted(unitSuffixes, key=len, reverse=True):
        ending = '_' + suffix
        if key.endswith(ending) and len(key) > len(ending):
            return key[:-len(ending)], unitSuffixes[suffix]

    return key, None


def toSI(value, unit, target):
    """ Converts value given in unit to a float in the target unit. Raises ValueError when the units are incompatible
    """

    return float((value * unit).rescale(target).magnitude)
