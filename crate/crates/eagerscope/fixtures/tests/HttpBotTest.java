import java.net.URL;
import java.util.Properties;
import org.junit.Test;
import static org.junit.Assert.assertNotNull;

public class HttpBotTest {
    private Properties properties = new Properties();

    @Test
    public void testConstr() throws Exception {
        HttpBot bot = new HttpBot(getValue("wikiMW1_13_url"));
        assertNotNull(bot);
        bot = new HttpBot(new URL(getValue("wikiMW1_13_url")));
        assertNotNull(bot);
    }

    private String getValue(String key) {
        return properties.getProperty(key);
    }
}
