#pragma once

#include <ostream>

#include "aurora/error.hpp"

namespace aurora::cli {

template <typename F>
int run_guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const TrainingError& e) {
    err << "error: " << e.what() << '\n';
    return kDiverged;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const DegeneratePairError& e) {
    err << "error: " << e.what() << " (re-issue the captcha)\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace aurora::cli
