#pragma once
// Minimal test support shared by the unit test binaries.
// REQUIRE stops at the first failure; EXPECT records it and keeps going.

#include <cstdlib>
#include <iostream>
#include <sstream>

inline int& test_failures() {
    static int n = 0;
    return n;
}

#define REQUIRE(cond, msg)                                                   \
    do {                                                                     \
        if (!(cond)) {                                                       \
            std::ostringstream os_;                                          \
            os_ << msg;                                                      \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " "     \
                      << os_.str() << "\n";                                  \
            std::exit(1);                                                    \
        }                                                                    \
    } while (0)

#define EXPECT(cond, msg)                                                    \
    do {                                                                     \
        if (!(cond)) {                                                       \
            std::ostringstream os_;                                          \
            os_ << msg;                                                      \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " "     \
                      << os_.str() << "\n";                                  \
            ++test_failures();                                               \
        }                                                                    \
    } while (0)

#define REQUIRE_THROWS(expr, ExcType, msg)                                   \
    do {                                                                     \
        bool caught_ = false;                                                \
        try {                                                                \
            (void)(expr);                                                    \
        } catch (const ExcType&) {                                           \
            caught_ = true;                                                  \
        }                                                                    \
        REQUIRE(caught_, msg);                                               \
    } while (0)

inline int test_summary(const char* name) {
    if (test_failures() == 0) {
        std::cout << name << ": all checks passed\n";
        return 0;
    }
    std::cerr << name << ": " << test_failures() << " checks failed\n";
    return 1;
}
