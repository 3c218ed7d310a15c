#pragma once

#include <string>
#include <vector>

#include "showdag/errors.hpp"

namespace showdag {

enum class EducationLevel { MiddleSchool, Masters };
enum class IncomeLabel { Under50K, Over50K };
enum class Highlight { Education, Age };

inline IncomeLabel flip(IncomeLabel v) {
    return v == IncomeLabel::Over50K ? IncomeLabel::Under50K : IncomeLabel::Over50K;
}

inline const char* to_string(IncomeLabel v) { return v == IncomeLabel::Over50K ? ">50K" : "<50K"; }
inline const char* to_string(EducationLevel v) {
    return v == EducationLevel::Masters ? "Masters" : "Middle school";
}

// One income-prediction profile as presented to a participant: two features,
// the model's prediction, and which feature the explanation highlights.
// Identifier letters A..H encode the relation between the shown information
// and the assumed intuitions; each letter has two age variants.
struct Instance {
    int row = 0;  // 1-based position in the built-in table
    EducationLevel education = EducationLevel::Masters;
    int age = 0;
    double feature_a = 0.0;  // anonymized encoding of education
    double feature_b = 0.0;  // anonymized encoding of age
    IncomeLabel prediction = IncomeLabel::Over50K;
    Highlight explanation = Highlight::Education;
    char letter = 'A';
    int variant = 1;
    bool anonymized = false;

    std::string identifier() const { return std::string(1, letter) + std::to_string(variant); }

    // display name of the highlighted feature; anonymized profiles only name
    // the encoded features
    std::string explanation_name() const {
        if (anonymized) return explanation == Highlight::Education ? "Feature A" : "Feature B";
        return explanation == Highlight::Education ? "Education" : "Age";
    }
};

// Hides the raw features behind their numeric encodings. The prediction and
// the identity of the highlighted feature are preserved. Idempotent.
inline Instance anonymize(Instance inst) {
    inst.anonymized = true;
    return inst;
}

// The sixteen built-in instances, in presentation order.
inline const std::vector<Instance>& builtin_instances() {
    static const std::vector<Instance> table = [] {
        auto masters = EducationLevel::Masters;
        auto middle = EducationLevel::MiddleSchool;
        auto over = IncomeLabel::Over50K;
        auto under = IncomeLabel::Under50K;
        auto edu = Highlight::Education;
        auto age = Highlight::Age;
        std::vector<Instance> t;
        t.push_back({1, masters, 25, 0.85, 0.13, over, edu, 'A', 1});
        t.push_back({2, masters, 24, 0.85, 0.10, over, edu, 'A', 2});
        t.push_back({3, middle, 46, 0.15, 0.83, under, edu, 'B', 1});
        t.push_back({4, middle, 49, 0.15, 0.93, under, edu, 'B', 2});
        t.push_back({5, masters, 26, 0.85, 0.17, under, age, 'C', 1});
        t.push_back({6, masters, 23, 0.85, 0.07, under, age, 'C', 2});
        t.push_back({7, middle, 48, 0.15, 0.90, over, age, 'D', 1});
        t.push_back({8, middle, 47, 0.15, 0.87, over, age, 'D', 2});
        t.push_back({9, masters, 23, 0.85, 0.07, under, edu, 'E', 1});
        t.push_back({10, masters, 26, 0.85, 0.17, under, edu, 'E', 2});
        t.push_back({11, middle, 47, 0.15, 0.87, over, edu, 'F', 1});
        t.push_back({12, middle, 48, 0.15, 0.90, over, edu, 'F', 2});
        t.push_back({13, masters, 24, 0.85, 0.10, over, age, 'G', 1});
        t.push_back({14, masters, 25, 0.85, 0.13, over, age, 'G', 2});
        t.push_back({15, middle, 49, 0.15, 0.93, under, age, 'H', 1});
        t.push_back({16, middle, 46, 0.15, 0.83, under, age, 'H', 2});
        return t;
    }();
    return table;
}

inline const Instance& builtin_instance(char letter, int variant) {
    for (const Instance& inst : builtin_instances())
        if (inst.letter == letter && inst.variant == variant) return inst;
    throw UnknownNode(std::string("no instance ") + letter + std::to_string(variant));
}

// The two data groups partition the sixteen instances into one-per-letter
// sets chosen so that inside each group the ABCD and EFGH halves have the
// same average age (36), removing age as a between-half confound.
inline int data_group_variant(int group, char letter) {
    if (group != 1 && group != 2) throw ConfigError("data group must be 1 or 2");
    static const char* group_one = "ABCF";  // letters taking variant 1 in group 1
    bool variant_one = std::string(group_one).find(letter) != std::string::npos;
    if (group == 2) variant_one = !variant_one;
    return variant_one ? 1 : 2;
}

inline const Instance& data_group_instance(int group, char letter) {
    return builtin_instance(letter, data_group_variant(group, letter));
}

// Dataset-relative feature magnitudes. Ages in the table cluster at 23-26
// and 46-49; the midpoint splits high from low.
inline bool age_is_high(int age) { return age > 36; }
inline bool education_is_high(EducationLevel e) { return e == EducationLevel::Masters; }

inline bool highlighted_value_high(const Instance& inst) {
    return inst.explanation == Highlight::Education ? education_is_high(inst.education)
                                                    : age_is_high(inst.age);
}

}  // namespace showdag
