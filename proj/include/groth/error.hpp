#pragma once
#include <stdexcept>
#include <string>

namespace groth {

/// Malformed or non-finite input.
class invalid_input : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class dimension_mismatch : public invalid_input
{
public:
    using invalid_input::invalid_input;
};

class index_out_of_range : public std::out_of_range
{
public:
    using std::out_of_range::out_of_range;
};

/// A group whose columns are (numerically) linearly dependent.
class degenerate_group : public invalid_input
{
public:
    degenerate_group(long group, const std::string& what)
        : invalid_input(what), group_(group)
    {}

    /// 1-based index of the offending group.
    long group() const noexcept { return group_; }

private:
    long group_;
};

/// Coherence measures need at least two groups.
class undefined_coherence : public invalid_input
{
public:
    using invalid_input::invalid_input;
};

/// Model order outside 1..m (or 1..r*m for column models).
class invalid_order : public invalid_input
{
public:
    using invalid_input::invalid_input;
};

/// FDP of an empty estimate, NDP of an empty truth.
class undefined_metric : public invalid_input
{
public:
    using invalid_input::invalid_input;
};

} // namespace groth
