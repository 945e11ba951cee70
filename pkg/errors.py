#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Exceptions raised by the simulator."""


class SimulationError(Exception):
    """Base class of all simulator errors."""


class ConfigurationError(SimulationError, ValueError):
    """Invalid or inconsistent configuration.

    'field' - name of the offending configuration field (or None)
    """
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def __reduce__(self):
        # keeps the field when raised inside a worker process
        return type(self), (str(self), self.field)


class ArgumentError(SimulationError, ValueError):
    """Invalid argument passed to a numerical operation."""


class DegenerateSubspaceError(SimulationError, ArithmeticError):
    """Quadratic form g = w^H S^H S w is not positive."""


class ExportError(SimulationError, OSError):
    """Results could not be written.

    'path' - file or directory that failed
    """
    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path
