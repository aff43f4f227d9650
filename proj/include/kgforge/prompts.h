#pragma once

// Prompt bodies for the six pipeline calls. Slots are written as {name}.

#include <string_view>

namespace kgforge::llm::prompts {

inline constexpr std::string_view kCqGeneration = R"PROMPT(Write competency questions based on the abstract level concepts in the document. Write questions that can be answered using the document only.
Write up to 3 questions per document. 
Below are the examples and follow the same format when generating competency questions: 

#### 
Document: Douglas Noel Adams (11 March 1952 - 11 May 2001) was an English author, humourist, and screenwriter, best known for The Hitchhiker's Guide to the Galaxy (HHGTTG). Originally a 1978 BBC radio comedy, The Hitchhiker's Guide to the Galaxy developed into a "trilogy" of five books that sold more than 15 million copies in his lifetime. It was further developed into a television series, several stage plays, comics, a video game, and a 2005 feature film. Adams's contribution to UK radio is commemorated in The Radio Academy's Hall of Fame.

####
Questions:
CQ1. What is the date of birth of Douglas Noel Adams?
CQ2. What is the date of death of Douglas Noel Adams?
CQ3. What is the occupation of Douglas Noel Adams?
CQ4. What is the country of citizenship of Douglas Noel Adams?
CQ5. What is the most notable work of Douglas Noel Adams?
CQ6. What is the original medium of The Hitchhiker's Guide to the Galaxy?
CQ7. In what year was The Hitchhiker's Guide to the Galaxy originally broadcast?
CQ8. How many books are in The Hitchhiker's Guide to the Galaxy "trilogy"?
CQ9. What other media adaptations were created based on The Hitchhiker's Guide to the Galaxy?

####
Document: 
{document to be processed}

####
Questions:)PROMPT";

inline constexpr std::string_view kCqAnswering = R"PROMPT(Use the provided document to answer user query. If you don't know the answer, just say that you don't know, don't try to make up an answer.
Passage: {doc}
Query: {query})PROMPT";

inline constexpr std::string_view kRelationExtraction = R"PROMPT(You are an assistant in building a knowledge graph. Analyze the following competency questions and identify all relationships and concepts concepts mentioned in the question. 
Extract relation first, then describe the usage of each relation based on your understanding given the context of competency questions.
Afterwards, extract all relation-related concepts.
You should only extract properties between entities and literals, not entities themselves, or classes of entities. Therefore, not all CQs contain valid properties.
If you don't know the answer, just say that you don't know, don't try to make up an answer. 
Merge all relations into one list and all concepts into one list. 
Do not reply using a complete sentence, and only give the answer in the following format.

Below are the examples and follow the same format to extract the relations: 

#### 
Document: Douglas Noel Adams (11 March 1952 - 11 May 2001) was an English author, humourist, and screenwriter, best known for The Hitchhiker's Guide to the Galaxy (HHGTTG). Originally a 1978 BBC radio comedy, The Hitchhiker's Guide to the Galaxy developed into a "trilogy" of five books that sold more than 15 million copies in his lifetime. It was further developed into a television series, several stage plays, comics, a video game, and a 2005 feature film. Adams's contribution to UK radio is commemorated in The Radio Academy's Hall of Fame.

####
Questions:
CQ1. What is the date of birth of Douglas Noel Adams?
CQ2. What is the date of death of Douglas Noel Adams?
CQ3. What is the occupation of Douglas Noel Adams?
CQ4. What is the country of citizenship of Douglas Noel Adams?
CQ5. What is the most notable work of Douglas Noel Adams?
CQ6. What is the original medium of The Hitchhiker's Guide to the Galaxy?
CQ7. In what year was The Hitchhiker's Guide to the Galaxy originally broadcast?
CQ8. How many books are in The Hitchhiker's Guide to the Galaxy "trilogy"?
CQ9. What other media adaptations were created based on The Hitchhiker's Guide to the Galaxy?

####
Relations:
(date of birth, The date on which the subject was born.)
(date of death, The date on which the subject died.)
(occupation, The occupation of a person.)
(country of citizenship, The country of which the subject is a citizen.)
(notable work, The most notable work of a person.)
(genre, The genre or type of work.)
(publication date, The date or period when a work was first published or released.)
(has part, Indicates that the subject has a certain part, component, or element.)
(series, Indicates that the subject is part of a series, such as a book series, film series, or television series.) 

####
Document: 
{document to be processed}

####
Questions:
{CQs}

####
Relations:)PROMPT";

inline constexpr std::string_view kOntologyMatching = R"PROMPT(Decide if the two properties are semantically similar in an ontology. 
You should say yes if you decide that these propties are similar, or if they are inverse properties.
Answer in "yes" or "no" only.
Property 1: {p1}
Property 2: {p2})PROMPT";

inline constexpr std::string_view kOntologyFormatting = R"PROMPT(Use the relations (properties) and their usage comments to build an ontology in RDF format.
If you don't know the answer, just say that you don't know, don't try to make up an answer.
Don't provide anything other than an ontology in RDF format.
Infer and summarize classes for domain and range of the relations across the concepts provided, and add these classes to relations only if required for clousre of relations.
For each relation, add relevant ontology entry for it. 
Add rdfs:comment based on the usage comments.
Use wdt: namespace for all relations discovered. Use entities under these prefixes if necessary:
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix wikibase: <http://wikiba.se/ontology#> .
@prefix schema: <http://schema.org/> .
@prefix wd: <http://www.wikidata.org/entity/> .
@prefix wdt: <http://www.wikidata.org/prop/direct/> .
Use turtle syntax.


Below is an example:

####
Relations:
(results, results: results of a competition such as sports or elections)

####
Ontology:
wdt:Results a wikibase:Property ;
    schema:description "results of a competition such as sports or elections" ;
    rdfs:label "results" ;
    rdfs:domain wd:referendum, wd:competition, wd:party conference, wd:sporting event ;
    rdfs:range wd:electoral result, wd:voting result, wd:sport result, wd:race result .

####
Relations:
{relation}

####
Ontology:)PROMPT";

inline constexpr std::string_view kKgGeneration = R"PROMPT(Your task is to construct a knowledge graph based on the provided ontology. 
Focus on understanding relationships from the question answer pair and document,  
and extract related entities, then mapping them to the ontology using the properties defined in the ontology. 
Do not include new properties other than those in ontology. Only use those properties in the ontology.
Output in turtle format following the ontology provided. 
You should only include knowledge in question answer pairs and the document.
Do not make up answers.

Use this ontology based on Wikidata as the starting point:
{ont}

Below is an example:

####
Document:
Douglas Noel Adams (11 March 1952 - 11 May 2001) was an English author, humourist, and screenwriter, best known for The Hitchhiker's Guide to the Galaxy (HHGTTG). Originally a 1978 BBC radio comedy, The Hitchhiker's Guide to the Galaxy developed into a "trilogy" of five books that sold more than 15 million copies in his lifetime. It was further developed into a television series, several stage plays, comics, a video game, and a 2005 feature film. Adams's contribution to UK radio is commemorated in The Radio Academy's Hall of Fame.

####
Question answer pairs:
Q: What is Douglas Adams an instance of?
A: Douglas Adams is an instance of human.

Q: What is Douglas Adams' sex or gender?
A: Douglas Adams' sex or gender is male.

Q: Where was Douglas Adams born?
A: Douglas Adams was born in Cambridge.

Q: Where did Douglas Adams die?
A: Douglas Adams died in Santa Barbara, California.

Q: When was Douglas Adams born?
A: Douglas Adams was born on 1952-03-11.

Q: On what date did Douglas Adams die?
A: Douglas Adams died on 2001-05-11.

Q: What occupation did Douglas Adams have?
A: Douglas Adams was a writer, comedian, and dramatist.

Q: What languages did Douglas Adams speak, write, or sign?
A: Douglas Adams spoke, wrote, or signed English.

Q: Where was Douglas Adams educated?
A: Douglas Adams was educated at St John's College, Cambridge and Brentwood School, Essex.

Q: What institution is Douglas Adams an alumni of?
A: Douglas Adams is an alumni of St John's College.

Q: What are some notable works by Douglas Adams?
A: Some notable works by Douglas Adams include The Hitchhiker's Guide to the Galaxy and Dirk Gently's Holistic Detective Agency.

Q: Was Douglas Adams a member of any notable organizations?
A: Yes, Douglas Adams was a member of Monty Python and The Independent on Sunday.

Q: What award did Douglas Adams receive?
A: Douglas Adams received the Locus Award for Best Science Fiction Novel.

Q: What is the Commons Category for Douglas Adams?
A: The Commons Category for Douglas Adams is "Douglas Adams".

####
Ontology:
@prefix rdf: http://www.w3.org/1999/02/22-rdf-syntax-ns# .
@prefix rdfs: http://www.w3.org/2000/01/rdf-schema# .
@prefix wdt: http://www.wikidata.org/prop/direct/ .
@prefix wd: http://www.wikidata.org/entity/ .
@prefix xsd: http://www.w3.org/2001/XMLSchema# .
wd:Douglas_Adams rdfs:label "Douglas Adams"@en ;
    wdt:InstanceOf wd:human ;
    wdt:SexOrGender wd:male ;
    wdt:PlaceOfBirth wd:Cambridge ;
    wdt:PlaceOfDeath wd:Santa_Barbara_California ;
    wdt:DateOfBirth "1952-03-11"^^xsd:date ;
    wdt:DateOfDeath "2001-05-11"^^xsd:date ;
    wdt:Occupation wd:writer ;
    wdt:Occupation wd:comedian ;
    wdt:Occupation wd:dramatist ;
    wdt:LanguagesSpokenWrittenOrSigned wd:English ;
    wdt:EducatedAt wd:St_Johns_College_Cambridge ;
    wdt:EducatedAt wd:Brentwood_School_Essex ;
    wdt:AlumniOf wd:St_Johns_College ;
    wdt:NotableWork wd:The_Hitchhikers_Guide_to_the_Galaxy ;
    wdt:NotableWork wd:Dirk_Gentlys_Holistic_Detective_Agency ;
    wdt:MemberOf wd:Monty_Python ;
    wdt:MemberOfOrganization wd:The_Independent_on_Sunday ;
    wdt:Award wd:Locus_Award_for_Best_Science_Fiction_Novel ;
    wdt:CommonsCategory "Douglas Adams"@en .
    
####
Document:
{doc}

####
Questions and Answer pairs:
{qa}

####
Ontology:)PROMPT";

}  // namespace kgforge::llm::prompts
