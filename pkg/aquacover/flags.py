""" Contains the flag class, this is designed to hold run events attached to an agent, ie 'Empty Partition' when no
observation point was assigned to it or 'QP Fallback' when the safety filter could not be solved.

These are attached to each agent of a run in .flags and counted in the run summary
"""

allowedFlags = ['Empty Partition', 'Slack Active', 'Safety Override', 'Direction Switched', 'Infeasible Shape Start',
                'QP Fallback', 'Fleet Change', 'Fake']


class Flags(object):

    def __init__(self):

        self.flags = set()
        self.counts = {}

    def addFlag(self, flag):

        if flag in allowedFlags:
            self.flags.add(flag)
            self.counts[flag] = self.counts.get(flag, 0) + 1
        else:
            raise InvalidFlag(flag)

    def removeFlag(self, flag):

        self.flags.remove(flag)
        del self.counts[flag]

    def count(self, flag):
        """ number of times flag was raised, 0 if never
        """
        return self.counts.get(flag, 0)

    def __repr__(self):

        return 'Flags({0})'.format(', '.join(sorted(repr(flag) for flag in self.flags)))

    def __iter__(self):

        return iter(sorted(self.flags))

    def __contains__(self, flag):

        return flag in self.flags


class InvalidFlag(BaseException):
    pass
