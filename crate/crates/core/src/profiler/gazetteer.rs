//! Bundled place names used to recognise columns of geographic names.

use std::collections::HashSet;
use std::sync::OnceLock;

const PLACES: &[&str] = &[
    // countries
    "afghanistan", "albania", "algeria", "andorra", "angola", "antigua and barbuda", "argentina", "armenia",
    "australia", "austria", "azerbaijan", "bahamas", "bahrain", "bangladesh", "barbados", "belarus", "belgium",
    "belize", "benin", "bhutan", "bolivia", "bosnia and herzegovina", "botswana", "brazil", "brunei", "bulgaria",
    "burkina faso", "burundi", "cabo verde", "cambodia", "cameroon", "canada", "central african republic", "chad",
    "chile", "china", "colombia", "comoros", "congo", "costa rica", "croatia", "cuba", "cyprus", "czechia",
    "czech republic", "denmark", "djibouti", "dominica", "dominican republic", "ecuador", "egypt", "el salvador",
    "equatorial guinea", "eritrea", "estonia", "eswatini", "ethiopia", "fiji", "finland", "france", "gabon",
    "gambia", "georgia", "germany", "ghana", "greece", "grenada", "guatemala", "guinea", "guinea-bissau", "guyana",
    "haiti", "honduras", "hungary", "iceland", "india", "indonesia", "iran", "iraq", "ireland", "israel", "italy",
    "ivory coast", "jamaica", "japan", "jordan", "kazakhstan", "kenya", "kiribati", "kosovo", "kuwait",
    "kyrgyzstan", "laos", "latvia", "lebanon", "lesotho", "liberia", "libya", "liechtenstein", "lithuania",
    "luxembourg", "madagascar", "malawi", "malaysia", "maldives", "mali", "malta", "marshall islands",
    "mauritania", "mauritius", "mexico", "micronesia", "moldova", "monaco", "mongolia", "montenegro", "morocco",
    "mozambique", "myanmar", "namibia", "nauru", "nepal", "netherlands", "new zealand", "nicaragua", "niger",
    "nigeria", "north korea", "north macedonia", "norway", "oman", "pakistan", "palau", "palestine", "panama",
    "papua new guinea", "paraguay", "peru", "philippines", "poland", "portugal", "qatar", "romania", "russia",
    "rwanda", "saint kitts and nevis", "saint lucia", "saint vincent and the grenadines", "samoa", "san marino",
    "sao tome and principe", "saudi arabia", "senegal", "serbia", "seychelles", "sierra leone", "singapore",
    "slovakia", "slovenia", "solomon islands", "somalia", "south africa", "south korea", "south sudan", "spain",
    "sri lanka", "sudan", "suriname", "sweden", "switzerland", "syria", "taiwan", "tajikistan", "tanzania",
    "thailand", "timor-leste", "togo", "tonga", "trinidad and tobago", "tunisia", "turkey", "turkmenistan",
    "tuvalu", "uganda", "ukraine", "united arab emirates", "united kingdom", "uk", "united states",
    "united states of america", "usa", "uruguay", "uzbekistan", "vanuatu", "vatican city", "venezuela", "vietnam",
    "yemen", "zambia", "zimbabwe",
    // continents and world regions
    "africa", "antarctica", "asia", "europe", "north america", "south america", "oceania", "middle east",
    "latin america", "caribbean", "scandinavia", "central asia", "southeast asia", "eastern europe",
    "western europe", "sub-saharan africa",
    // us states
    "alabama", "alaska", "arizona", "arkansas", "california", "colorado", "connecticut", "delaware", "florida",
    "hawaii", "idaho", "illinois", "indiana", "iowa", "kansas", "kentucky", "louisiana", "maine", "maryland",
    "massachusetts", "michigan", "minnesota", "mississippi", "missouri", "montana", "nebraska", "nevada",
    "new hampshire", "new jersey", "new mexico", "new york", "north carolina", "north dakota", "ohio", "oklahoma",
    "oregon", "pennsylvania", "rhode island", "south carolina", "south dakota", "tennessee", "texas", "utah",
    "vermont", "virginia", "washington", "west virginia", "wisconsin", "wyoming",
    // major cities
    "amsterdam", "athens", "atlanta", "auckland", "bangkok", "barcelona", "beijing", "berlin", "bogota", "boston",
    "brussels", "bucharest", "budapest", "buenos aires", "cairo", "cape town", "chicago", "copenhagen", "dallas",
    "delhi", "denver", "dubai", "dublin", "frankfurt", "geneva", "hamburg", "helsinki", "hong kong", "houston",
    "istanbul", "jakarta", "johannesburg", "karachi", "kyiv", "lagos", "lima", "lisbon", "london", "los angeles",
    "madrid", "manila", "melbourne", "mexico city", "miami", "milan", "montreal", "moscow", "mumbai", "munich",
    "nairobi", "new delhi", "new york city", "osaka", "oslo", "paris", "prague", "rio de janeiro", "rome",
    "san francisco", "santiago", "sao paulo", "seattle", "seoul", "shanghai", "stockholm", "sydney", "taipei",
    "tehran", "tokyo", "toronto", "vancouver", "vienna", "warsaw", "zurich", "bratislava", "kosice", "vilnius",
    "riga", "tallinn", "ljubljana", "zagreb", "belgrade", "sofia", "reykjavik", "edinburgh", "manchester",
];

fn index() -> &'static HashSet<&'static str> {
    static INDEX: OnceLock<HashSet<&'static str>> = OnceLock::new();
    INDEX.get_or_init(|| PLACES.iter().copied().collect())
}

pub fn is_place(cell: &str) -> bool {
    let normalized = cell.trim().to_lowercase();
    index().contains(normalized.as_str())
}

pub fn places() -> &'static [&'static str] {
    PLACES
}
