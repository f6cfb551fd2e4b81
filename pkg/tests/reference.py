"""Brute-force reference implementations used as test oracles.

Each function evaluates the defining formula literally on python floats:
full sort for medians, strict left-to-right accumulation for sums.  The
production estimators must agree with these bit for bit.
"""


def ref_median(values):
    s = sorted(float(x) for x in values)
    n = len(s)
    h = n // 2
    if n % 2 == 1:
        return s[h]
    return (s[h - 1] + s[h]) / 2.0


def ref_mean_of_medians(values, k, k_prime):
    values = [float(x) for x in values]
    acc = 0.0
    for j in range(k_prime):
        acc += ref_median(values[j * k : (j + 1) * k])
    return acc / k_prime


def ref_median_of_means(values, k, k_prime):
    values = [float(x) for x in values]
    means = []
    for j in range(k_prime):
        acc = 0.0
        for x in values[j * k : (j + 1) * k]:
            acc += x
        means.append(acc / k)
    return ref_median(means)


def ref_truncated_mean(values, c):
    values = [float(x) for x in values]
    acc = 0.0
    for x in values:
        if abs(x) <= c:
            acc += x
    return acc / len(values)
