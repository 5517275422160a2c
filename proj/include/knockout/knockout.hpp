#ifndef KNOCKOUT_KNOCKOUT_HPP
#define KNOCKOUT_KNOCKOUT_HPP

#include <knockout/bracket_dp.hpp>
#include <knockout/core.hpp>
#include <knockout/crmodel.hpp>
#include <knockout/error.hpp>
#include <knockout/ingest.hpp>
#include <knockout/solver.hpp>
#include <knockout/stats.hpp>
#include <knockout/winprob.hpp>

#include <string_view>

namespace knockout {

inline constexpr std::string_view kVersion = "1.0.0";

} // namespace knockout

#endif // KNOCKOUT_KNOCKOUT_HPP
