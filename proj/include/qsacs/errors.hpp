#pragma once

#include <stdexcept>
#include <string>

namespace qsacs {

// Rejected parameters or malformed inputs.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Odd SACS at the origin (or any point with vanishing norm).
class DegenerateState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Q_M requested with <M> = 0 and no limiting rule.
class IndeterminateQ : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CutoffNotConverged : public std::runtime_error {
public:
    CutoffNotConverged(const std::string& what, double delta)
        : std::runtime_error(what), delta_(delta) {}
    double delta() const { return delta_; }

private:
    double delta_;
};

class TailTooLarge : public std::runtime_error {
public:
    TailTooLarge(const std::string& what, double tail)
        : std::runtime_error(what), tail_(tail) {}
    double tail() const { return tail_; }

private:
    double tail_;
};

class DimensionOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoTransitionFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qsacs
