#include "capgeo/scenario.hpp"
