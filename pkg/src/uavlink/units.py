"""Decibel <-> linear conversions used at the configuration boundary."""

import math


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    if value <= 0.0:
        return -math.inf
    return 10.0 * math.log10(value)


def dbw_to_watts(value_dbw: float) -> float:
    return db_to_linear(value_dbw)


def dbm_to_watts(value_dbm: float) -> float:
    return db_to_linear(value_dbm - 30.0)


def watts_to_dbm(value_w: float) -> float:
    return linear_to_db(value_w) + 30.0
