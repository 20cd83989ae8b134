#include "capgeo/willmore.hpp"
