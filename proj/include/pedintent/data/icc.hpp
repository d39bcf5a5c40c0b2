#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pedintent/common.hpp"

namespace pedintent {

// Ratings grid for agreement analysis: one row per subject, one column per
// rater, no missing cells.
struct RaterMatrix {
  std::size_t subjects = 0;
  std::size_t raters = 0;
  std::vector<double> ratings;  // subjects x raters, row-major

  double at(std::size_t subject, std::size_t rater) const {
    return ratings[subject * raters + rater];
  }
};

// Throws ValidationError unless the matrix is at least 2x2, fully
// populated, and finite.
void validate_ratings(const RaterMatrix& m);

// Shrout-Fleiss single-rater ICC forms. Oneway treats raters as nested
// noise (ICC(1,1)); the two-way forms separate a rater effect, scoring
// either consistency (ICC(3,1), rater shifts forgiven) or absolute
// agreement (ICC(2,1), rater shifts penalized).
enum class IccModel { Oneway, TwowayRandomConsistency, TwowayRandomAgreement };

const char* to_string(IccModel model);
IccModel icc_model_from_string(const std::string& name);

// ICC from the one-way or two-way ANOVA mean squares of the grid. Degenerate
// grids whose denominator vanishes (no variance anywhere) raise
// NumericalError.
double icc(const RaterMatrix& m,
           IccModel model = IccModel::TwowayRandomAgreement);

// Comma-separated grid, one header row naming the raters, then one row of
// ratings per subject.
RaterMatrix load_ratings_csv(const std::filesystem::path& path);

}  // namespace pedintent
