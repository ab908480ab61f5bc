#pragma once

#include <span>
#include <string_view>

// Built-in word lists. Mirrored as editable files under core/data/.
namespace gsr::resources {

std::span<const std::string_view> english_stop_words();
std::span<const std::string_view> male_entities();
std::span<const std::string_view> female_entities();

// Word lists for the four stereotype dichotomies; first half of each pair is
// the stereotypically male group.
std::span<const std::string_view> agency_traits();
std::span<const std::string_view> communion_traits();
std::span<const std::string_view> science_terms();
std::span<const std::string_view> arts_terms();
std::span<const std::string_view> career_terms();
std::span<const std::string_view> family_terms();

struct JobShare {
  std::string_view job;
  double pct_female;
  double pct_male;
};

std::span<const JobShare> male_jobs();
std::span<const JobShare> female_jobs();

}  // namespace gsr::resources
